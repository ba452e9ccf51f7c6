#include "w6j/spin_network.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cstdlib>
#include <limits>
#include <unordered_map>

namespace w6j {

namespace {

using nlohmann::json;

constexpr int kUnset = std::numeric_limits<int>::min();

enum class Role { HeadSeeker, TailSeeker, Neutral };

Role endpoint_role(const std::unordered_map<std::string, const Node*>& nmap, const Endpoint& ep) {
  if (const PortRef* p = std::get_if<PortRef>(&ep)) {
    return nmap.at(p->node)->kind == NodeKind::ThreeJ ? Role::HeadSeeker : Role::TailSeeker;
  }
  const Terminal& t = std::get<Terminal>(ep);
  if (t.kind != TerminalKind::MIndex) return Role::Neutral;
  return t.starred ? Role::HeadSeeker : Role::TailSeeker;
}

// An edge end is aligned when the arrow obeys the convention for what the
// end attaches to; neutral ends never object.
bool end_aligned(Role role, bool is_head) {
  if (role == Role::Neutral) return true;
  return (role == Role::HeadSeeker) == is_head;
}

int parity_from_twice(int twice_exponent) {
  // (-1)^(t/2) with t known to be even.
  return (twice_exponent / 2) % 2 == 0 ? 1 : -1;
}

}  // namespace

const Node* SpinNetwork::find_node(const std::string& id) const {
  for (const auto& n : nodes)
    if (n.id == id) return &n;
  return nullptr;
}

const Edge* SpinNetwork::find_edge(const std::string& id) const {
  for (const auto& e : edges)
    if (e.id == id) return &e;
  return nullptr;
}

void SpinNetwork::validate() const {
  std::unordered_map<std::string, const Node*> nmap;
  for (const auto& n : nodes)
    if (!nmap.emplace(n.id, &n).second) throw ValidationError("duplicate node id '" + n.id + "'");
  std::unordered_map<std::string, const Edge*> emap;
  for (const auto& e : edges)
    if (!emap.emplace(e.id, &e).second) throw ValidationError("duplicate edge id '" + e.id + "'");

  auto endpoint_matches = [](const Endpoint& ep, const std::string& node, int port) {
    const PortRef* p = std::get_if<PortRef>(&ep);
    return p && p->node == node && p->port == port;
  };

  for (const auto& n : nodes) {
    size_t want = n.kind == NodeKind::ThreeJ ? 3u : 2u;
    if (n.ports.size() != want)
      throw ValidationError("node '" + n.id + "' must list " + std::to_string(want) + " ports");
    for (size_t i = 0; i < n.ports.size(); ++i) {
      auto it = emap.find(n.ports[i]);
      if (it == emap.end())
        throw ValidationError("node '" + n.id + "' references unknown edge '" + n.ports[i] + "'");
      const Edge& e = *it->second;
      bool from_ok = endpoint_matches(e.from, n.id, static_cast<int>(i));
      bool to_ok = endpoint_matches(e.to, n.id, static_cast<int>(i));
      if (from_ok && to_ok)
        throw ValidationError("edge '" + e.id + "' attaches twice to the same port of '" + n.id +
                              "'");
      if (!from_ok && !to_ok)
        throw ValidationError("edge '" + e.id + "' does not list its attachment to node '" + n.id +
                              "' port " + std::to_string(i));
    }
    if (n.kind == NodeKind::TwoJ) {
      const Edge* a = emap.at(n.ports[0]);
      const Edge* b = emap.at(n.ports[1]);
      if (a->j != b->j)
        throw ValidationError("2j-node '" + n.id + "' joins edges of unequal spin");
    }
  }

  for (const auto& e : edges) {
    if (e.j.is_negative()) throw ValidationError("edge '" + e.id + "' carries a negative spin");
    for (const Endpoint* ep : {&e.from, &e.to}) {
      if (const PortRef* p = std::get_if<PortRef>(ep)) {
        auto it = nmap.find(p->node);
        if (it == nmap.end())
          throw ValidationError("edge '" + e.id + "' references unknown node '" + p->node + "'");
        const Node& n = *it->second;
        if (p->port < 0 || static_cast<size_t>(p->port) >= n.ports.size())
          throw ValidationError("edge '" + e.id + "' references port " + std::to_string(p->port) +
                                " out of range on node '" + p->node + "'");
        if (n.ports[p->port] != e.id)
          throw ValidationError("edge '" + e.id + "' and node '" + p->node +
                                "' disagree about port " + std::to_string(p->port));
      } else {
        const Terminal& t = std::get<Terminal>(*ep);
        if (t.kind == TerminalKind::MIndex && !is_valid_jm(e.j, t.m))
          throw ValidationError("edge '" + e.id + "' ends in an invalid index terminal (j=" +
                                e.j.str() + ", m=" + t.m.str() + ")");
      }
    }
    if (std::holds_alternative<PortRef>(e.from) && e.from == e.to)
      throw ValidationError("edge '" + e.id + "' connects a port to itself");
  }
}

// ---------------------------------------------------------------------------
// JSON round trip
// ---------------------------------------------------------------------------

namespace {

const json& require_field(const json& obj, const char* key, const std::string& ctx) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(ctx + ": missing field '" + key + "'");
  return *it;
}

std::string require_string(const json& obj, const char* key, const std::string& ctx) {
  const json& v = require_field(obj, key, ctx);
  if (!v.is_string()) throw ValidationError(ctx + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

long require_integer(const json& obj, const char* key, const std::string& ctx) {
  const json& v = require_field(obj, key, ctx);
  if (!v.is_number_integer()) throw ValidationError(ctx + ": field '" + key + "' must be an integer");
  return v.get<long>();
}

Endpoint parse_endpoint(const json& v, const std::string& ctx) {
  if (!v.is_object()) throw ValidationError(ctx + ": endpoint must be an object");
  if (v.contains("node")) {
    PortRef p;
    p.node = require_string(v, "node", ctx);
    p.port = static_cast<int>(require_integer(v, "port", ctx));
    return p;
  }
  if (v.contains("terminal")) {
    const json& t = v.at("terminal");
    if (!t.is_object()) throw ValidationError(ctx + ": terminal must be an object");
    Terminal term;
    std::string kind = require_string(t, "kind", ctx);
    if (kind == "ket") {
      term.kind = TerminalKind::Ket;
    } else if (kind == "bra") {
      term.kind = TerminalKind::Bra;
    } else if (kind == "m") {
      term.kind = TerminalKind::MIndex;
      term.m = HalfInt::from_twice(static_cast<int>(require_integer(t, "m2", ctx)));
      term.starred = t.value("starred", false);
    } else {
      throw ValidationError(ctx + ": unknown terminal kind '" + kind + "'");
    }
    return term;
  }
  throw ValidationError(ctx + ": endpoint needs either 'node' or 'terminal'");
}

json endpoint_to_json(const Endpoint& ep) {
  json v;
  if (const PortRef* p = std::get_if<PortRef>(&ep)) {
    v["node"] = p->node;
    v["port"] = p->port;
    return v;
  }
  const Terminal& t = std::get<Terminal>(ep);
  json term;
  switch (t.kind) {
    case TerminalKind::Ket:
      term["kind"] = "ket";
      break;
    case TerminalKind::Bra:
      term["kind"] = "bra";
      break;
    case TerminalKind::MIndex:
      term["kind"] = "m";
      term["m2"] = t.m.twice();
      term["starred"] = t.starred;
      break;
  }
  v["terminal"] = term;
  return v;
}

long to_serializable_long(const Integer& z, const char* what) {
  if (!z.fits_slong_p())
    throw ValidationError(std::string("network phase ") + what + " does not fit a 64-bit field");
  return z.get_si();
}

}  // namespace

SpinNetwork parse_network(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
  if (!doc.is_object()) throw ValidationError("network document must be a JSON object");

  SpinNetwork net;
  const json& nodes = require_field(doc, "nodes", "network");
  if (!nodes.is_array()) throw ValidationError("network: 'nodes' must be an array");
  for (const json& jn : nodes) {
    Node n;
    n.id = require_string(jn, "id", "node");
    std::string kind = require_string(jn, "kind", "node '" + n.id + "'");
    if (kind == "w3") {
      n.kind = NodeKind::ThreeJ;
    } else if (kind == "k2") {
      n.kind = NodeKind::TwoJ;
    } else {
      throw ValidationError("node '" + n.id + "': unknown kind '" + kind + "'");
    }
    const json& ports = require_field(jn, "ports", "node '" + n.id + "'");
    if (!ports.is_array()) throw ValidationError("node '" + n.id + "': 'ports' must be an array");
    for (const json& p : ports) {
      if (!p.is_string()) throw ValidationError("node '" + n.id + "': ports must be edge ids");
      n.ports.push_back(p.get<std::string>());
    }
    std::string orient = jn.value("orientation", "ccw");
    if (orient == "ccw") {
      n.orientation = Orientation::CCW;
    } else if (orient == "cw") {
      n.orientation = Orientation::CW;
    } else {
      throw ValidationError("node '" + n.id + "': unknown orientation '" + orient + "'");
    }
    std::string stub = jn.value("stub", "up");
    if (stub == "up") {
      n.stub = StubDir::Up;
    } else if (stub == "down") {
      n.stub = StubDir::Down;
    } else {
      throw ValidationError("node '" + n.id + "': unknown stub direction '" + stub + "'");
    }
    net.nodes.push_back(std::move(n));
  }

  const json& edges = require_field(doc, "edges", "network");
  if (!edges.is_array()) throw ValidationError("network: 'edges' must be an array");
  for (const json& je : edges) {
    Edge e;
    e.id = require_string(je, "id", "edge");
    long j2 = require_integer(je, "j2", "edge '" + e.id + "'");
    if (j2 < 0 || j2 > std::numeric_limits<int>::max())
      throw ValidationError("edge '" + e.id + "': j2 out of range");
    e.j = HalfInt::from_twice(static_cast<int>(j2));
    e.from = parse_endpoint(require_field(je, "from", "edge '" + e.id + "'"), "edge '" + e.id + "'");
    e.to = parse_endpoint(require_field(je, "to", "edge '" + e.id + "'"), "edge '" + e.id + "'");
    std::string arrow = je.value("arrow", "from_to");
    if (arrow == "from_to") {
      e.arrow_from_to = true;
    } else if (arrow == "to_from") {
      e.arrow_from_to = false;
    } else {
      throw ValidationError("edge '" + e.id + "': unknown arrow direction '" + arrow + "'");
    }
    net.edges.push_back(std::move(e));
  }

  if (doc.contains("phase")) {
    const json& p = doc.at("phase");
    if (!p.is_object()) throw ValidationError("network: 'phase' must be an object");
    long cn = require_integer(p, "coef_num", "phase");
    long cd = p.value("coef_den", 1L);
    long rn = p.value("radicand_num", 1L);
    long rd = p.value("radicand_den", 1L);
    if (cd == 0 || rd == 0) throw ValidationError("phase: zero denominator");
    net.phase = ExactRadical(Rational(cn, cd), Rational(rn, rd));
  }

  net.validate();
  return net;
}

std::string serialize_network(const SpinNetwork& net) {
  nlohmann::ordered_json doc;
  doc["nodes"] = nlohmann::ordered_json::array();
  for (const Node& n : net.nodes) {
    nlohmann::ordered_json jn;
    jn["id"] = n.id;
    jn["kind"] = n.kind == NodeKind::ThreeJ ? "w3" : "k2";
    jn["ports"] = n.ports;
    if (n.kind == NodeKind::ThreeJ)
      jn["orientation"] = n.orientation == Orientation::CCW ? "ccw" : "cw";
    else
      jn["stub"] = n.stub == StubDir::Up ? "up" : "down";
    doc["nodes"].push_back(jn);
  }
  doc["edges"] = nlohmann::ordered_json::array();
  for (const Edge& e : net.edges) {
    nlohmann::ordered_json je;
    je["id"] = e.id;
    je["j2"] = e.j.twice();
    je["from"] = endpoint_to_json(e.from);
    je["to"] = endpoint_to_json(e.to);
    je["arrow"] = e.arrow_from_to ? "from_to" : "to_from";
    doc["edges"].push_back(je);
  }
  nlohmann::ordered_json phase;
  phase["coef_num"] = to_serializable_long(net.phase.coef().num(), "coefficient numerator");
  phase["coef_den"] = to_serializable_long(net.phase.coef().den(), "coefficient denominator");
  phase["radicand_num"] = to_serializable_long(net.phase.radicand(), "radicand");
  phase["radicand_den"] = 1;
  doc["phase"] = phase;
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace {

struct EvalEdge {
  int jt = 0;       // twice the spin
  int s_from = 1;   // delivery sign at the from/to ends
  int s_to = 1;
  bool factor = false;  // one (-1)^(j-m) on this edge
};

struct PortSlot {
  int edge = -1;
  bool at_from = true;  // whether this port holds the edge's 'from' end
};

struct EvalGraph {
  std::vector<EvalEdge> eedges;
  std::vector<std::vector<PortSlot>> slots;  // per node, per port
  std::vector<std::vector<int>> edge_nodes;  // node indices touching each edge
  int flip_sign = 1;                         // phases from normalizing misoriented edges
};

EvalGraph build_eval_graph(const SpinNetwork& net) {
  std::unordered_map<std::string, const Node*> nmap;
  std::unordered_map<std::string, int> nidx;
  for (size_t i = 0; i < net.nodes.size(); ++i) {
    nmap.emplace(net.nodes[i].id, &net.nodes[i]);
    nidx.emplace(net.nodes[i].id, static_cast<int>(i));
  }

  EvalGraph g;
  g.eedges.resize(net.edges.size());
  g.slots.resize(net.nodes.size());
  g.edge_nodes.resize(net.edges.size());
  for (size_t i = 0; i < net.nodes.size(); ++i)
    g.slots[i].resize(net.nodes[i].ports.size());

  for (size_t ei = 0; ei < net.edges.size(); ++ei) {
    const Edge& e = net.edges[ei];
    EvalEdge& ee = g.eedges[ei];
    ee.jt = e.j.twice();

    Role role_from = endpoint_role(nmap, e.from);
    Role role_to = endpoint_role(nmap, e.to);
    bool from_aligned = end_aligned(role_from, !e.arrow_from_to);
    bool to_aligned = end_aligned(role_to, e.arrow_from_to);
    if (!from_aligned && !to_aligned) {
      // Wrong at both ends: equivalent to the flipped edge times (-1)^(2j).
      g.flip_sign *= (ee.jt % 2 == 0) ? 1 : -1;
      from_aligned = true;
      to_aligned = true;
    }
    ee.s_from = from_aligned ? 1 : -1;
    ee.s_to = to_aligned ? 1 : -1;
    ee.factor = !from_aligned || !to_aligned;

    for (const Endpoint* ep : {&e.from, &e.to}) {
      if (const PortRef* p = std::get_if<PortRef>(ep)) {
        int ni = nidx.at(p->node);
        g.slots[ni][p->port] = PortSlot{static_cast<int>(ei), ep == &e.from};
        g.edge_nodes[ei].push_back(ni);
      }
    }
  }
  return g;
}

// Delivery sign of a slot: the projection handed to the node at this port is
// sign * m_edge.
int slot_sign(const EvalGraph& g, const PortSlot& s) {
  return s.at_from ? g.eedges[s.edge].s_from : g.eedges[s.edge].s_to;
}

class Contractor {
 public:
  Contractor(const SpinNetwork& net, const EvalGraph& g, long long term_limit)
      : net_(net), g_(g), limit_(term_limit), m_(g.eedges.size(), kUnset) {}

  ExactRadical run() {
    dfs();
    return Rational(g_.flip_sign) * acc_;
  }

 private:
  // Tries to force the value of edges at node ni.  Returns false when the
  // node's linear constraint is already violated.
  bool propagate_node(size_t ni, std::vector<int>& trail) {
    // Group the constraint sum(s_i * m_i) = 0 by edge.
    int known = 0;
    int unknown_edge = -1;
    int unknown_coef = 0;
    bool more_unknowns = false;
    std::unordered_map<int, int> coef;
    for (const PortSlot& s : g_.slots[ni]) coef[s.edge] += slot_sign(g_, s);
    for (auto [edge, c] : coef) {
      if (m_[edge] != kUnset) {
        known += c * m_[edge];
      } else if (c != 0) {
        if (unknown_edge >= 0) {
          more_unknowns = true;
        } else {
          unknown_edge = edge;
          unknown_coef = c;
        }
      }
    }
    if (unknown_edge < 0) return known == 0;
    if (more_unknowns) return true;  // cannot decide yet
    if (known % unknown_coef != 0) return false;
    int value = -known / unknown_coef;
    const EvalEdge& ee = g_.eedges[unknown_edge];
    if (std::abs(value) > ee.jt) return false;
    if ((value - ee.jt) % 2 != 0) return false;
    m_[unknown_edge] = value;
    trail.push_back(unknown_edge);
    return true;
  }

  bool propagate(std::vector<int>& trail) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (size_t ni = 0; ni < net_.nodes.size(); ++ni) {
        size_t before = trail.size();
        if (!propagate_node(ni, trail)) return false;
        if (trail.size() != before) changed = true;
      }
    }
    return true;
  }

  void emit_term() {
    int sign = 1;
    ExactRadical term(Rational(1));
    for (size_t ei = 0; ei < g_.eedges.size(); ++ei) {
      const EvalEdge& ee = g_.eedges[ei];
      if (ee.factor) sign *= parity_from_twice(ee.jt - m_[ei]);
    }
    for (size_t ni = 0; ni < net_.nodes.size(); ++ni) {
      const Node& n = net_.nodes[ni];
      const auto& slots = g_.slots[ni];
      if (n.kind == NodeKind::TwoJ) {
        int first = n.stub == StubDir::Up ? 0 : 1;
        int x = slot_sign(g_, slots[first]) * m_[slots[first].edge];
        int y = slot_sign(g_, slots[1 - first]) * m_[slots[1 - first].edge];
        if (x + y != 0) return;  // annihilated by the 2j delta
        sign *= parity_from_twice(g_.eedges[slots[first].edge].jt - x);
      } else {
        std::array<int, 3> order = {0, 1, 2};
        if (n.orientation == Orientation::CW) order = {0, 2, 1};
        std::array<HalfInt, 3> j, m;
        for (int k = 0; k < 3; ++k) {
          const PortSlot& s = slots[order[k]];
          j[k] = HalfInt::from_twice(g_.eedges[s.edge].jt);
          m[k] = HalfInt::from_twice(slot_sign(g_, s) * m_[s.edge]);
        }
        const ExactRadical& w = three_j_cached(j[0], j[1], j[2], m[0], m[1], m[2]);
        if (w.is_zero()) return;
        term *= w;
      }
    }
    acc_ += Rational(sign) * term;
  }

  void dfs() {
    if (++visited_ > limit_)
      throw ResourceLimit("network contraction exceeded the lattice budget");
    std::vector<int> trail;
    if (!propagate(trail)) {
      for (int e : trail) m_[e] = kUnset;
      return;
    }
    // Smallest-range unassigned edge next.
    int pick = -1;
    for (size_t ei = 0; ei < g_.eedges.size(); ++ei) {
      if (m_[ei] != kUnset) continue;
      if (pick < 0 || g_.eedges[ei].jt < g_.eedges[pick].jt) pick = static_cast<int>(ei);
    }
    if (pick < 0) {
      emit_term();
    } else {
      int jt = g_.eedges[pick].jt;
      for (int v = -jt; v <= jt; v += 2) {
        m_[pick] = v;
        dfs();
      }
      m_[pick] = kUnset;
    }
    for (int e : trail) m_[e] = kUnset;
  }

  const SpinNetwork& net_;
  const EvalGraph& g_;
  long long limit_;
  long long visited_ = 0;
  std::vector<int> m_;
  ExactRadical acc_;
};

}  // namespace

ExactRadical evaluate_closed(const SpinNetwork& net, long long term_limit) {
  net.validate();
  for (const Edge& e : net.edges) {
    if (!std::holds_alternative<PortRef>(e.from) || !std::holds_alternative<PortRef>(e.to))
      throw ValidationError("evaluate_closed requires a closed network; edge '" + e.id +
                            "' ends in a terminal");
  }
  EvalGraph g = build_eval_graph(net);
  Contractor c(net, g, term_limit);
  return net.phase * c.run();
}

// ---------------------------------------------------------------------------
// Rewrites
// ---------------------------------------------------------------------------

SpinNetwork reverse_arrow(const SpinNetwork& net, const std::string& edge_id) {
  SpinNetwork out = net;
  for (Edge& e : out.edges) {
    if (e.id == edge_id) {
      e.arrow_from_to = !e.arrow_from_to;
      return out;
    }
  }
  throw UnknownEdge("no edge '" + edge_id + "' in network");
}

SpinNetwork invert_stub(const SpinNetwork& net, const std::string& node_id) {
  SpinNetwork out = net;
  for (Node& n : out.nodes) {
    if (n.id != node_id) continue;
    if (n.kind != NodeKind::TwoJ) throw NotATwoJNode("node '" + node_id + "' is not a 2j-node");
    n.stub = n.stub == StubDir::Up ? StubDir::Down : StubDir::Up;
    return out;
  }
  throw ValidationError("no node '" + node_id + "' in network");
}

namespace {

// Whether the end of edge `e` sitting on node `node_id` is the arrow head.
bool head_at_node(const Edge& e, const std::string& node_id) {
  const PortRef* p = std::get_if<PortRef>(&e.from);
  bool from_here = p && p->node == node_id;
  return from_here ? !e.arrow_from_to : e.arrow_from_to;
}

// Fragment transfer of X -e1- Ka -mid- Kb -e3- Y at probe spin 1/2, with the
// outer ends read as aligned.  True exactly when the pair composes to the
// plain identity wire, i.e. when it may be spliced away without any phase.
// Every sign in the fragment has the form (-1)^(a*j + b*m) with no constant
// offset, so the half-integer probe certifies all spins at once.
bool pair_is_identity_wire(const Node& ka, const Node& kb, const Edge& e1, const Edge& mid,
                           const Edge& e3) {
  const int jt = 1;
  auto k2_first_port = [](const Node& n) { return n.stub == StubDir::Up ? 0 : 1; };
  // k2 ends want the arrow tail; a head end takes -m plus the edge factor.
  auto near_sign = [](bool head_here) { return head_here ? -1 : 1; };

  bool e1_head_near = head_at_node(e1, ka.id);
  bool e3_head_near = head_at_node(e3, kb.id);
  bool mid_head_at_ka = head_at_node(mid, ka.id);

  // Value of a k2 node given the deliveries on its (outer, mid) ports;
  // returns 0 when the delta annihilates the term.
  auto k2_value = [&](const Node& n, const Edge& outer, int douter, int dmid) {
    int port_outer = n.ports[0] == outer.id ? 0 : 1;
    bool outer_first = port_outer == k2_first_port(n);
    int x = outer_first ? douter : dmid;
    int y = outer_first ? dmid : douter;
    if (x + y != 0) return 0;
    return parity_from_twice(jt - x);
  };

  int T[2][2] = {{0, 0}, {0, 0}};
  for (int mx = -1; mx <= 1; mx += 2) {
    for (int my = -1; my <= 1; my += 2) {
      for (int mm = -1; mm <= 1; mm += 2) {
        int weight = parity_from_twice(jt - mm);  // the mid edge has one head end
        if (e1_head_near) weight *= parity_from_twice(jt - mx);
        if (e3_head_near) weight *= parity_from_twice(jt - my);
        int d1 = near_sign(e1_head_near) * mx;
        int d3 = near_sign(e3_head_near) * my;
        int dmid_ka = mid_head_at_ka ? -mm : mm;
        int dmid_kb = mid_head_at_ka ? mm : -mm;
        weight *= k2_value(ka, e1, d1, dmid_ka);
        weight *= k2_value(kb, e3, d3, dmid_kb);
        T[(mx + 1) / 2][(my + 1) / 2] += weight;
      }
    }
  }
  return T[0][0] == 1 && T[1][1] == 1 && T[0][1] == 0 && T[1][0] == 0;
}

}  // namespace

SpinNetwork cancel_stub_pairs(const SpinNetwork& net) {
  SpinNetwork out = net;
  out.validate();

  bool changed = true;
  while (changed) {
    changed = false;
    std::unordered_map<std::string, Node*> nmap;
    for (Node& n : out.nodes) nmap[n.id] = &n;
    std::unordered_map<std::string, Edge*> emap;
    for (Edge& e : out.edges) emap[e.id] = &e;

    for (const Edge& mid : out.edges) {
      const PortRef* pf = std::get_if<PortRef>(&mid.from);
      const PortRef* pt = std::get_if<PortRef>(&mid.to);
      if (!pf || !pt || pf->node == pt->node) continue;
      Node* ka = nmap.at(pf->node);
      Node* kb = nmap.at(pt->node);
      if (ka->kind != NodeKind::TwoJ || kb->kind != NodeKind::TwoJ) continue;
      const std::string& e1_id = ka->ports[1 - pf->port];
      const std::string& e3_id = kb->ports[1 - pt->port];
      if (e1_id == mid.id || e3_id == mid.id || e1_id == e3_id) continue;
      Edge* e1 = emap.at(e1_id);
      Edge* e3 = emap.at(e3_id);

      // Far-end arrow senses must admit a single through-going edge.
      auto far_sense_is_head = [&](const Edge& e, const std::string& near_node) {
        const PortRef* p = std::get_if<PortRef>(&e.from);
        bool from_is_near = p && p->node == near_node;
        // Head sits at 'to' when the arrow runs from->to.
        bool head_at_to = e.arrow_from_to;
        return from_is_near ? head_at_to : !head_at_to;
      };
      bool x_head = far_sense_is_head(*e1, ka->id);
      bool y_head = far_sense_is_head(*e3, kb->id);
      if (x_head == y_head) continue;
      if (!pair_is_identity_wire(*ka, *kb, *e1, mid, *e3)) continue;

      // Splice: keep e1's identity, reattach its pair-side end to e3's far
      // endpoint, drop the pair and its two inner edges.
      Endpoint far_x;
      {
        const PortRef* p = std::get_if<PortRef>(&e1->from);
        bool from_is_near = p && p->node == ka->id;
        far_x = from_is_near ? e1->to : e1->from;
      }
      Endpoint far_y;
      {
        const PortRef* p = std::get_if<PortRef>(&e3->from);
        bool from_is_near = p && p->node == kb->id;
        far_y = from_is_near ? e3->to : e3->from;
      }
      Edge merged;
      merged.id = e1->id;
      merged.j = e1->j;
      merged.from = x_head ? far_y : far_x;
      merged.to = x_head ? far_x : far_y;
      merged.arrow_from_to = true;
      if (const PortRef* p = std::get_if<PortRef>(&far_y)) {
        Node* ny = nmap.at(p->node);
        ny->ports[p->port] = merged.id;
      }

      // The contraction flips a doubly misoriented edge at a cost of
      // (-1)^(2j).  Splicing can fuse two singly misoriented halves into one
      // such edge (or split one), so compensate to keep the value fixed:
      // the fused edge pays the flip exactly when its tail lands on a
      // head-seeking end while its head does not land on a tail-seeking one.
      {
        std::unordered_map<std::string, const Node*> roles;
        for (const Node& n : out.nodes) roles[n.id] = &n;
        const Endpoint& head_far = x_head ? far_x : far_y;
        const Endpoint& tail_far = x_head ? far_y : far_x;
        Role head_role = endpoint_role(roles, head_far);
        Role tail_role = endpoint_role(roles, tail_far);
        if (tail_role == Role::HeadSeeker && head_role != Role::TailSeeker)
          out.phase = Rational(parity_sign(2 * merged.j)) * out.phase;
      }

      std::string ka_id = ka->id, kb_id = kb->id;
      std::string mid_id = mid.id, e3_rm = e3->id, e1_rm = e1->id;
      std::erase_if(out.nodes, [&](const Node& n) { return n.id == ka_id || n.id == kb_id; });
      std::erase_if(out.edges,
                    [&](const Edge& e) { return e.id == mid_id || e.id == e3_rm || e.id == e1_rm; });
      out.edges.push_back(merged);
      changed = true;
      break;
    }
  }
  out.validate();
  return out;
}

SpinNetwork to_standard_form(const SpinNetwork& net) {
  SpinNetwork out = net;
  out.validate();

  // Drop removable 2j-pairs first; turn same-oriented adjacent pairs into
  // removable ones by inverting one stub (at the documented phase).
  out = cancel_stub_pairs(out);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Edge& e : out.edges) {
      const PortRef* pf = std::get_if<PortRef>(&e.from);
      const PortRef* pt = std::get_if<PortRef>(&e.to);
      if (!pf || !pt || pf->node == pt->node) continue;
      const Node* a = out.find_node(pf->node);
      const Node* b = out.find_node(pt->node);
      if (a->kind != NodeKind::TwoJ || b->kind != NodeKind::TwoJ) continue;
      // Adjacent 2j-nodes survived cancellation: flip one stub and retry.
      SpinNetwork flipped = invert_stub(out, a->id);
      flipped.phase = Rational(parity_sign(2 * e.j)) * flipped.phase;
      SpinNetwork reduced = cancel_stub_pairs(flipped);
      if (reduced.nodes.size() < flipped.nodes.size()) {
        out = std::move(reduced);
        changed = true;
        break;
      }
    }
  }

  std::unordered_map<std::string, const Node*> nmap;
  for (const Node& n : out.nodes) nmap[n.id] = &n;

  // Orient every edge that a single flip fixes.
  for (Edge& e : out.edges) {
    Role rf = endpoint_role(nmap, e.from);
    Role rt = endpoint_role(nmap, e.to);
    bool head_is_to = e.arrow_from_to;
    bool from_ok = end_aligned(rf, !head_is_to);
    bool to_ok = end_aligned(rt, head_is_to);
    if (!from_ok && !to_ok) {
      e.arrow_from_to = !e.arrow_from_to;
      out.phase = Rational(parity_sign(2 * e.j)) * out.phase;
    }
  }

  // Insert a 2j-node on each edge joining two head-seeking ends.
  std::vector<Edge> pending = out.edges;
  for (const Edge& e : pending) {
    Role rf = endpoint_role(nmap, e.from);
    Role rt = endpoint_role(nmap, e.to);
    bool head_is_to = e.arrow_from_to;
    bool from_ok = end_aligned(rf, !head_is_to);
    bool to_ok = end_aligned(rt, head_is_to);
    if (from_ok && to_ok) continue;
    if (rf != Role::HeadSeeker || rt != Role::HeadSeeker) continue;

    const Endpoint head_ep = head_is_to ? e.to : e.from;
    const Endpoint tail_ep = head_is_to ? e.from : e.to;
    auto unique_id = [&out](std::string base) {
      std::string id = base;
      int k = 2;
      while (out.find_edge(id) || out.find_node(id)) id = base + "_" + std::to_string(k++);
      return id;
    };
    std::string kid = unique_id(e.id + "_k");
    std::string head_edge_id = unique_id(e.id + "_h");
    std::string tail_edge_id = unique_id(e.id + "_t");

    // First operand faces the original head side: that ordering reproduces
    // the plain contraction exactly (no leftover phase).
    Node k2{kid, NodeKind::TwoJ, {head_edge_id, tail_edge_id}, Orientation::CCW, StubDir::Up};
    Edge head_half{head_edge_id, e.j, PortRef{kid, 0}, head_ep, true};
    Edge tail_half{tail_edge_id, e.j, PortRef{kid, 1}, tail_ep, true};

    if (const PortRef* p = std::get_if<PortRef>(&head_ep)) {
      // Rewire the old port names.
      for (Node& n : out.nodes)
        if (n.id == p->node) n.ports[p->port] = head_edge_id;
    }
    if (const PortRef* p = std::get_if<PortRef>(&tail_ep)) {
      for (Node& n : out.nodes)
        if (n.id == p->node) n.ports[p->port] = tail_edge_id;
    }
    std::erase_if(out.edges, [&](const Edge& cur) { return cur.id == e.id; });
    out.nodes.push_back(k2);
    out.edges.push_back(head_half);
    out.edges.push_back(tail_half);
    nmap.clear();
    for (const Node& n : out.nodes) nmap[n.id] = &n;
  }

  out.validate();
  return out;
}

SpinNetwork hermitian_conjugate(const SpinNetwork& net) {
  SpinNetwork out = net;
  for (Edge& e : out.edges) {
    e.arrow_from_to = !e.arrow_from_to;
    for (Endpoint* ep : {&e.from, &e.to}) {
      if (Terminal* t = std::get_if<Terminal>(ep)) {
        if (t->kind == TerminalKind::Ket)
          t->kind = TerminalKind::Bra;
        else if (t->kind == TerminalKind::Bra)
          t->kind = TerminalKind::Ket;
        else
          t->starred = !t->starred;  // a double star cancels
      }
    }
  }
  // The scalar phase is real, so conjugation leaves it unchanged.
  return out;
}

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

SpinNetwork tetrahedral_network(const SixJArgs& args) {
  // Edge labels (l1..l6) = (j1, j2, j12, j3, j4, j23); triads
  // (l1 l2 l3), (l1 l5 l6), (l2 l6 l4), (l3 l4 l5).
  const std::array<HalfInt, 6> l = {args.j1, args.j2, args.j12, args.j3, args.j4, args.j23};
  const std::array<std::string, 6> base = {"1", "2", "12", "3", "4", "23"};

  // Where each edge's plain and primed copies attach: (node, port).
  struct Attach {
    int node;
    int port;
  };
  const std::array<Attach, 6> plain = {{{0, 0}, {0, 1}, {0, 2}, {2, 2}, {3, 2}, {1, 2}}};
  const std::array<Attach, 6> primed = {{{1, 0}, {2, 0}, {3, 0}, {3, 1}, {1, 1}, {2, 1}}};

  SpinNetwork net;
  net.nodes.resize(10);
  for (int v = 0; v < 4; ++v) {
    net.nodes[v].id = "w" + std::to_string(v);
    net.nodes[v].kind = NodeKind::ThreeJ;
    net.nodes[v].orientation = Orientation::CCW;
    net.nodes[v].ports.resize(3);
  }
  for (int r = 0; r < 6; ++r) {
    Node& k = net.nodes[4 + r];
    k.id = "k" + base[r];
    k.kind = NodeKind::TwoJ;
    k.stub = StubDir::Up;
    k.ports = {base[r] + "a", base[r] + "b"};
  }
  for (int r = 0; r < 6; ++r) {
    Edge ea;
    ea.id = base[r] + "a";
    ea.j = l[r];
    ea.from = PortRef{"k" + base[r], 0};
    ea.to = PortRef{net.nodes[plain[r].node].id, plain[r].port};
    ea.arrow_from_to = true;
    net.nodes[plain[r].node].ports[plain[r].port] = ea.id;
    net.edges.push_back(ea);

    Edge eb;
    eb.id = base[r] + "b";
    eb.j = l[r];
    eb.from = PortRef{"k" + base[r], 1};
    eb.to = PortRef{net.nodes[primed[r].node].id, primed[r].port};
    eb.arrow_from_to = true;
    net.nodes[primed[r].node].ports[primed[r].port] = eb.id;
    net.edges.push_back(eb);
  }
  net.validate();
  return net;
}

SpinNetwork theta_network(HalfInt j1, HalfInt j2, HalfInt j3) {
  SpinNetwork net;
  net.nodes.resize(2);
  net.nodes[0] = Node{"a", NodeKind::ThreeJ, {"e1", "e2", "e3"}, Orientation::CCW, StubDir::Up};
  net.nodes[1] = Node{"b", NodeKind::ThreeJ, {"e1", "e2", "e3"}, Orientation::CCW, StubDir::Up};
  const std::array<HalfInt, 3> js = {j1, j2, j3};
  for (int i = 0; i < 3; ++i) {
    Edge e;
    e.id = "e" + std::to_string(i + 1);
    e.j = js[i];
    e.from = PortRef{"a", i};
    e.to = PortRef{"b", i};
    e.arrow_from_to = true;
    net.edges.push_back(e);
  }
  net.validate();
  return net;
}

SpinNetwork loop_network(HalfInt j) {
  SpinNetwork net;
  net.nodes.resize(2);
  net.nodes[0] = Node{"ka", NodeKind::TwoJ, {"a", "b"}, Orientation::CCW, StubDir::Up};
  net.nodes[1] = Node{"kb", NodeKind::TwoJ, {"b", "a"}, Orientation::CCW, StubDir::Up};
  Edge ea{"a", j, PortRef{"ka", 0}, PortRef{"kb", 1}, true};
  Edge eb{"b", j, PortRef{"kb", 0}, PortRef{"ka", 1}, true};
  net.edges = {ea, eb};
  net.validate();
  return net;
}

}  // namespace w6j
