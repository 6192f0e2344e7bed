#ifndef EGR_GRAPH_HPP
#define EGR_GRAPH_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "egr/matrix.hpp"

namespace egr {

/// Oriented edge, normalized so tail < head.
struct Edge {
  int tail = 0;
  int head = 0;
};

/// Squared edge lengths, one entry per edge. All entries nonnegative.
struct LengthSpec {
  std::vector<double> phi;

  static LengthSpec ones(int m) { return LengthSpec{std::vector<double>(m, 1.0)}; }

  int size() const { return static_cast<int>(phi.size()); }
  double operator[](int k) const { return phi[k]; }
};

/// Edge weights, one entry per edge.
struct WeightVector {
  std::vector<double> w;

  int size() const { return static_cast<int>(w.size()); }
  double operator[](int k) const { return w[k]; }
};

/// Connected simple undirected graph. Immutable after construction; edges are
/// stored with tail < head and sorted lexicographically.
class Graph {
 public:
  int n() const { return n_; }
  int m() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int k) const { return edges_[k]; }
  const LengthSpec& phi() const { return phi_; }
  const std::vector<std::string>& labels() const { return labels_; }

  friend Graph from_edge_list(int n, std::vector<std::pair<int, int>> edges,
                              std::optional<std::vector<double>> phi,
                              std::vector<std::string> labels);

 private:
  Graph() = default;

  int n_ = 0;
  std::vector<Edge> edges_;
  LengthSpec phi_;
  std::vector<std::string> labels_;
};

/// Builds a graph from an edge list, validating simplicity and connectivity.
/// phi defaults to all ones (the unit-distance case).
Graph from_edge_list(int n, std::vector<std::pair<int, int>> edges,
                     std::optional<std::vector<double>> phi = std::nullopt,
                     std::vector<std::string> labels = {});

/// m-by-n incidence matrix: row k has +1 at head(k) and -1 at tail(k).
Matrix incidence_matrix(const Graph& g);

/// Weighted Laplacian B^t diag(w) B.
SymMatrix laplacian(const Graph& g, std::span<const double> w);
SymMatrix laplacian(const Graph& g, const WeightVector& w);

// Generator catalog. Vertex numbering per family:
//   cycle(n)           0..n-1 around the cycle
//   path(n)            0..n-1 along the path
//   complete(n)        all pairs
//   grid(p, q)         vertex (r, c) -> r*q + c, edges right and down
//   circular_ladder(n) outer cycle 0..n-1, inner cycle n..2n-1, rungs (i, n+i)
//   petersen           outer 5-cycle 0-4, spokes (i, 5+i), inner pentagram (5+i, 5+(i+2)%5)
//   house              square 0=bottom-left, 1=bottom-right, 2=top-right, 3=top-left; apex 4
//   house_x            house plus the square's diagonals (0,2), (1,3)
//   tetrahedral        complete(4)
//   cube               vertices 0..7 as 3-bit strings, edges differ in one bit
//   octahedral         antipodal pairs (i, i+3); edges all pairs except antipodal
//   dodecahedral       outer 10-cycle 0-9, spokes (i, 10+i), inner star (10+i, 10+(i+2)%10)
//   icosahedral        apex 0, upper pentagon 1-5, lower pentagon 6-10, apex 11
Graph generate(std::string_view family, int n = 0, int p = 0, int q = 0);

/// Families accepted by generate().
const std::vector<std::string>& generator_families();

// Graph file format (UTF-8 JSON):
//   {"n": int, "edges": [[i,j],...], "phi": [..] (optional), "labels": [..] (optional)}
// Unknown top-level keys are ignored with a warning.
Graph load_graph_json_string(const std::string& text, std::vector<std::string>* warnings = nullptr);
Graph load_graph_json(const std::filesystem::path& path, std::vector<std::string>* warnings = nullptr);

/// Canonical serialization; parse(serialize(g)) is a fixed point.
std::string graph_to_json(const Graph& g);

}  // namespace egr

#endif
