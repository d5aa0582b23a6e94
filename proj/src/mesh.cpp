#include "qtilde/mesh.hpp"

#include <numeric>
#include <set>
#include <stdexcept>

#include "json.hpp"

namespace qtilde {

std::size_t StructuredCubicalMesh::cell_count() const {
  std::size_t total = 1;
  for (int c : cells) total *= static_cast<std::size_t>(c);
  return total;
}

std::size_t StructuredCubicalMesh::flat_index(const std::vector<int>& cell) const {
  std::size_t flat = 0, stride = 1;
  for (int i = 0; i < n; ++i) {
    flat += static_cast<std::size_t>(cell[i]) * stride;
    stride *= static_cast<std::size_t>(cells[i]);
  }
  return flat;
}

bool StructuredCubicalMesh::active(const std::vector<int>& cell) const {
  for (int i = 0; i < n; ++i)
    if (cell[i] < 0 || cell[i] >= cells[i]) return false;
  return mask[flat_index(cell)];
}

std::vector<std::vector<int>> StructuredCubicalMesh::active_cells() const {
  std::vector<std::vector<int>> out;
  std::vector<int> cell(n, 0);
  while (true) {
    if (mask[flat_index(cell)]) out.push_back(cell);
    int pos = 0;
    while (pos < n && cell[pos] == cells[pos] - 1) cell[pos++] = 0;
    if (pos == n) break;
    ++cell[pos];
  }
  return out;
}

Box StructuredCubicalMesh::cell_box(const std::vector<int>& cell) const {
  Box box;
  for (int i = 0; i < n; ++i) {
    Rational lo = origin[i] + spacing[i] * cell[i];
    box.emplace_back(lo, lo + spacing[i]);
  }
  return box;
}

AffineDiagonalMap StructuredCubicalMesh::cell_map(const std::vector<int>& cell) const {
  AffineDiagonalMap phi;
  for (int i = 0; i < n; ++i) {
    phi.scale.push_back(spacing[i] / 2);
    phi.shift.push_back(origin[i] + spacing[i] * cell[i] + spacing[i] / 2);
  }
  return phi;
}

namespace {

Rational json_rational(const nlohmann::json& v) {
  if (v.is_string()) {
    Rational q(v.get<std::string>());
    q.canonicalize();
    return q;
  }
  if (v.is_number_integer()) return Rational(v.get<long>());
  if (v.is_number_float()) {
    Rational q(v.get<double>());
    q.canonicalize();
    return q;
  }
  throw std::domain_error("mesh_from_json: bad numeric entry");
}

void flatten_mask(const nlohmann::json& v, std::vector<bool>& out) {
  if (v.is_array()) {
    for (const auto& e : v) flatten_mask(e, out);
    return;
  }
  if (v.is_boolean())
    out.push_back(v.get<bool>());
  else if (v.is_number())
    out.push_back(v.get<double>() != 0.0);
  else
    throw std::domain_error("mesh_from_json: bad mask entry");
}

}  // namespace

StructuredCubicalMesh mesh_from_json(const std::string& text) {
  nlohmann::json doc = nlohmann::json::parse(text);
  StructuredCubicalMesh mesh;
  mesh.n = doc.at("dim").get<int>();
  if (mesh.n < 1) throw std::domain_error("mesh_from_json: dim must be positive");
  mesh.cells = doc.at("cells").get<std::vector<int>>();
  if (static_cast<int>(mesh.cells.size()) != mesh.n)
    throw std::domain_error("mesh_from_json: cells length != dim");
  for (int c : mesh.cells)
    if (c < 1) throw std::domain_error("mesh_from_json: nonpositive cell count");
  for (int i = 0; i < mesh.n; ++i) {
    mesh.spacing.push_back(doc.contains("spacing") ? json_rational(doc["spacing"].at(i))
                                                   : Rational(1));
    mesh.origin.push_back(doc.contains("origin") ? json_rational(doc["origin"].at(i))
                                                 : Rational(0));
    if (mesh.spacing.back() <= 0)
      throw std::domain_error("mesh_from_json: nonpositive spacing");
  }
  if (doc.contains("mask")) {
    flatten_mask(doc["mask"], mesh.mask);
    if (mesh.mask.size() != mesh.cell_count())
      throw std::domain_error("mesh_from_json: mask size mismatch");
  } else {
    mesh.mask.assign(mesh.cell_count(), true);
  }
  if (std::find(mesh.mask.begin(), mesh.mask.end(), true) == mesh.mask.end())
    throw std::domain_error("mesh_from_json: no active cells");
  return mesh;
}

StructuredCubicalMesh unit_cube_mesh(int n, int cells_per_axis) {
  StructuredCubicalMesh mesh;
  mesh.n = n;
  mesh.cells.assign(n, cells_per_axis);
  mesh.spacing.assign(n, Rational(1) / cells_per_axis);
  mesh.origin.assign(n, Rational(0));
  mesh.mask.assign(mesh.cell_count(), true);
  return mesh;
}

EntityList entities(const StructuredCubicalMesh& mesh, int l) {
  if (l < 0 || l > mesh.n) throw std::domain_error("entities: invalid dimension");
  std::set<Entity> found;
  const auto free_sets = enumerate_sigma(full_index_set(mesh.n), l);
  for (const auto& cell : mesh.active_cells())
    for (const auto& fm : free_sets) {
      IndexSet fixed = sigma_complement(fm).sigma;
      const int nf = static_cast<int>(fixed.size());
      for (int corner = 0; corner < (1 << nf); ++corner) {
        Entity e{fm.sigma, cell};
        for (int b = 0; b < nf; ++b)
          if (corner >> b & 1) ++e.coords[fixed[b] - 1];
        found.insert(std::move(e));
      }
    }
  EntityList list;
  for (const auto& e : found) {
    list.ids.emplace(e, list.items.size());
    list.items.push_back(e);
  }
  return list;
}

std::vector<std::size_t> element_entities(const StructuredCubicalMesh& mesh,
                                          const std::vector<int>& cell, int l,
                                          const EntityList& list) {
  std::vector<std::size_t> out;
  for (const auto& fm : enumerate_sigma(full_index_set(mesh.n), l)) {
    IndexSet fixed = sigma_complement(fm).sigma;
    const int nf = static_cast<int>(fixed.size());
    for (int corner = 0; corner < (1 << nf); ++corner) {
      Entity e{fm.sigma, cell};
      for (int b = 0; b < nf; ++b)
        if (corner >> b & 1) ++e.coords[fixed[b] - 1];
      out.push_back(list.ids.at(e));
    }
  }
  return out;
}

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t m) : parent(m) {
    std::iota(parent.begin(), parent.end(), std::size_t{0});
  }
  std::size_t find(std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

}  // namespace

GlobalDofMap global_dofs(const StructuredCubicalMesh& mesh, int k, int r) {
  const int n = mesh.n;
  const auto sigmas = enumerate_sigma(full_index_set(n), k);
  const auto nodes = tensor_nodes(n, r);
  const std::size_t pts = nodes.count();
  const std::size_t per_cell = sigmas.size() * pts;

  const auto cells = mesh.active_cells();
  std::map<std::size_t, std::size_t> ordinal;  // flat cell index -> position
  for (std::size_t c = 0; c < cells.size(); ++c) ordinal[mesh.flat_index(cells[c])] = c;

  UnionFind uf(cells.size() * per_cell);
  auto local_id = [&](std::size_t cell_ord, std::size_t s, std::size_t node) {
    return cell_ord * per_cell + s * pts + node;
  };

  // identify across each shared codimension-one face
  for (std::size_t c = 0; c < cells.size(); ++c)
    for (int axis = 1; axis <= n; ++axis) {
      std::vector<int> nb = cells[c];
      ++nb[axis - 1];
      if (!mesh.active(nb)) continue;
      const std::size_t cn = ordinal.at(mesh.flat_index(nb));
      for (std::size_t node = 0; node < pts; ++node) {
        auto mi = nodes.multi_index(node);
        if (mi[axis - 1] != r) continue;  // node not on the shared face
        auto mj = mi;
        mj[axis - 1] = 0;
        std::size_t other = 0, stride = 1;
        for (int i = 0; i < n; ++i) {
          other += static_cast<std::size_t>(mj[i]) * stride;
          stride *= static_cast<std::size_t>(r + 1);
        }
        for (std::size_t s = 0; s < sigmas.size(); ++s) {
          if (sigmas[s].contains(axis)) continue;  // normal component stays broken
          uf.unite(local_id(c, s, node), local_id(cn, s, other));
        }
      }
    }

  GlobalDofMap dofmap;
  dofmap.k = k;
  dofmap.r = r;
  dofmap.local_to_global.assign(cells.size(), std::vector<std::size_t>(per_cell));
  std::map<std::size_t, std::size_t> root_to_global;
  std::map<std::vector<long>, std::size_t> point_ids;
  for (std::size_t c = 0; c < cells.size(); ++c)
    for (std::size_t s = 0; s < sigmas.size(); ++s)
      for (std::size_t node = 0; node < pts; ++node) {
        const std::size_t local = local_id(c, s, node);
        const std::size_t root = uf.find(local);
        auto [it, fresh] = root_to_global.emplace(root, dofmap.count);
        if (fresh) {
          ++dofmap.count;
          // lattice key of the physical node: c*r + j per axis
          auto mi = nodes.multi_index(node);
          std::vector<long> key(n);
          for (int i = 0; i < n; ++i)
            key[i] = static_cast<long>(cells[c][i]) * r + mi[i];
          auto [pit, pfresh] = point_ids.emplace(key, dofmap.node_count);
          if (pfresh) ++dofmap.node_count;
          dofmap.node_group.push_back(pit->second);
        }
        dofmap.local_to_global[c][s * pts + node] = it->second;
      }
  return dofmap;
}

long moment_dof_count(const StructuredCubicalMesh& mesh, int k, int r) {
  long total = 0;
  for (int l = k; l <= mesh.n; ++l) {
    long per_entity = 0;
    if (l == k || r >= 2) {
      long t = binomial(l, l - k);
      for (int i = 0; i < l - k; ++i) t *= (r - 1);
      for (int i = 0; i < k; ++i) t *= (r + 1);
      per_entity = t;
    }
    if (per_entity)
      total += per_entity * static_cast<long>(entities(mesh, l).items.size());
  }
  return total;
}

}  // namespace qtilde
