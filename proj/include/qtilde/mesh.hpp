// Structured axis-aligned cubical meshes with an optional active-cell mask,
// entity enumeration, and the conforming global degree-of-freedom map built
// from the nodal reference element.

#ifndef QTILDE_MESH_HPP
#define QTILDE_MESH_HPP

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "qtilde/polyform.hpp"
#include "qtilde/refelem.hpp"

namespace qtilde {

struct StructuredCubicalMesh {
  int n = 0;
  std::vector<int> cells;         // cells per axis
  std::vector<Rational> spacing;  // h_i > 0
  std::vector<Rational> origin;
  std::vector<bool> mask;  // active flags, flattened with axis 1 fastest

  std::size_t cell_count() const;
  std::size_t flat_index(const std::vector<int>& cell) const;
  bool active(const std::vector<int>& cell) const;

  // Active cells in lexicographic order, axis 1 fastest.
  std::vector<std::vector<int>> active_cells() const;

  // Physical bounding box of a cell.
  Box cell_box(const std::vector<int>& cell) const;

  // Reference-to-physical map x = center + (h/2) .* xhat.
  AffineDiagonalMap cell_map(const std::vector<int>& cell) const;
};

// Builds a mesh from the JSON document
//   {"dim": n, "cells": [...], "spacing": [...], "origin": [...],
//    "mask": optional nested or flat 0/1 array}
// Nested masks list the last axis outermost, so the flattened order has
// axis 1 fastest.  Spacing and origin entries may be numbers or "p/q"
// strings and default to 1 and 0.
StructuredCubicalMesh mesh_from_json(const std::string& text);

// Uniform N^n grid on the unit cube.
StructuredCubicalMesh unit_cube_mesh(int n, int cells_per_axis);

// An l-dimensional mesh entity: free axes plus lattice coordinates (cell
// index on free axes, plane index on fixed axes).
struct Entity {
  IndexSet free;
  std::vector<int> coords;

  bool operator<(const Entity& o) const {
    return std::tie(free, coords) < std::tie(o.free, o.coords);
  }
};

struct EntityList {
  std::vector<Entity> items;
  std::map<Entity, std::size_t> ids;
};

// All l-dimensional entities touching at least one active cell, in
// deterministic order.
EntityList entities(const StructuredCubicalMesh& mesh, int l);

// Ids of the 2^{n-l} C(n,l) entities of dimension l incident to a cell.
std::vector<std::size_t> element_entities(const StructuredCubicalMesh& mesh,
                                          const std::vector<int>& cell, int l,
                                          const EntityList& list);

// Conforming global DOFs for the nodal Qtilde element: equivalence classes
// of (cell, node, component) identified across shared codimension-one faces
// whose normal is not in the component's index set.
struct GlobalDofMap {
  int k = 0, r = 0;
  std::size_t count = 0;
  // per active cell (in active_cells() order), local dof -> global dof;
  // local dofs ordered component-major, node-minor as in nodal_values.
  std::vector<std::vector<std::size_t>> local_to_global;
  // geometric grouping: global dof -> id of its physical node point
  std::vector<std::size_t> node_group;
  std::size_t node_count = 0;
};

GlobalDofMap global_dofs(const StructuredCubicalMesh& mesh, int k, int r);

// Global DOF count implied by moment-DOF sharing: entity-wise sum of the
// per-entity moment multiplicities of the Qtilde element.
long moment_dof_count(const StructuredCubicalMesh& mesh, int k, int r);

}  // namespace qtilde

#endif
