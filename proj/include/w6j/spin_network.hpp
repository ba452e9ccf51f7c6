#pragma once

#include <string>
#include <variant>
#include <vector>

#include "w6j/exact_radical.hpp"
#include "w6j/half_int.hpp"
#include "w6j/wigner.hpp"

namespace w6j {

// Diagrammatic spin networks built from trivalent 3j-nodes and bivalent
// 2j-nodes, with directed edges and an overall scalar phase.
//
// Evaluation conventions (validated against the algebraic m-sum in tests):
//  * A ccw 3j-node with edge projections (m1, m2, m3) delivered at its ports
//    contributes the 3j-symbol with columns in port order; a cw node swaps
//    its last two operands.
//  * A 2j-node contributes (-1)^(j-x) delta_{x,-y}, where (x, y) are the
//    deliveries at its ports in stub order (stub "up" reads port 0 first,
//    "down" reads port 1 first).
//  * Arrows point toward 3j-nodes/starred index terminals and away from
//    2j-nodes/unstarred terminals.  An edge end that violates this receives
//    the negated projection together with one factor (-1)^(j-m); an edge
//    wrong at both ends is first flipped at cost (-1)^(2j).
enum class NodeKind { ThreeJ, TwoJ };
enum class Orientation { CCW, CW };
enum class StubDir { Up, Down };
enum class TerminalKind { Ket, Bra, MIndex };

struct PortRef {
  std::string node;
  int port = 0;
  friend bool operator==(const PortRef&, const PortRef&) = default;
};

struct Terminal {
  TerminalKind kind = TerminalKind::Ket;
  HalfInt m;          // MIndex only
  bool starred = false;  // MIndex only
  friend bool operator==(const Terminal&, const Terminal&) = default;
};

using Endpoint = std::variant<PortRef, Terminal>;

struct Node {
  std::string id;
  NodeKind kind = NodeKind::ThreeJ;
  std::vector<std::string> ports;  // edge ids, in cyclic order
  Orientation orientation = Orientation::CCW;  // 3j-nodes
  StubDir stub = StubDir::Up;                  // 2j-nodes
};

struct Edge {
  std::string id;
  HalfInt j;
  Endpoint from;
  Endpoint to;
  bool arrow_from_to = true;

  const Endpoint& head() const { return arrow_from_to ? to : from; }
  const Endpoint& tail() const { return arrow_from_to ? from : to; }
};

struct SpinNetwork {
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  ExactRadical phase{Rational(1)};

  const Node* find_node(const std::string& id) const;
  const Edge* find_edge(const std::string& id) const;

  // Graph invariants: unique ids, port counts, edge/port cross-references,
  // matching spins at 2j-nodes, valid terminal projections.
  // Throws ValidationError.
  void validate() const;
};

// JSON round trip.  parse throws ParseError for malformed JSON and
// ValidationError for schema or graph violations; serialize emits a stable,
// human-readable document.
SpinNetwork parse_network(const std::string& json_text);
std::string serialize_network(const SpinNetwork& net);

// Exact contraction of a closed network (no terminals): sums the product of
// node component values over all edge projections, then applies the stored
// phase.  term_limit caps the number of enumerated lattice points
// (ResourceLimit beyond it).
ExactRadical evaluate_closed(const SpinNetwork& net, long long term_limit = (1LL << 24));

// Elementary moves.  Each applies the diagrammatic operation, so the closed
// value changes by exactly (-1)^(2j): reversing one arrow, or swapping the
// operand order of one 2j-node.  Applying either move twice restores the
// original value.
SpinNetwork reverse_arrow(const SpinNetwork& net, const std::string& edge_id);
SpinNetwork invert_stub(const SpinNetwork& net, const std::string& node_id);
// Value-preserving: splices out every adjacent 2j-node pair that composes to
// the identity wire (stubs oppositely oriented along the strand, with
// compatible arrows); pairs oriented the same way along the strand stay put.
SpinNetwork cancel_stub_pairs(const SpinNetwork& net);
// Orients all edges per the standard-form convention, inserting or removing
// 2j-nodes where needed and accumulating the extracted phases.
SpinNetwork to_standard_form(const SpinNetwork& net);
// Mirror image: bra and ket terminals swap, every arrow reverses, index
// terminals toggle their star; closed-network values are unchanged (real).
SpinNetwork hermitian_conjugate(const SpinNetwork& net);

// The closed network whose contraction is the 6j m-sum: four 3j-nodes
// pairwise joined through six 2j-nodes, in standard form.
SpinNetwork tetrahedral_network(const SixJArgs& args);
// Two 3j-nodes joined by three parallel edges; evaluates to 1 on valid
// triads and 0 otherwise.
SpinNetwork theta_network(HalfInt j1, HalfInt j2, HalfInt j3);
// Two 2j-nodes joined by two parallel edges (a closed loop of spin j).
SpinNetwork loop_network(HalfInt j);

}  // namespace w6j
