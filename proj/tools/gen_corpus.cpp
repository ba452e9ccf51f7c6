// Regenerates the golden network corpus under data/networks/.
//
// Every expected value is taken from a source independent of the network
// contractor: the 6j m-sum, the closed loop/theta values, and the documented
// one-move phase rules ((-1)^(2j) per arrow reversal or stub swap).  The
// corpus therefore stays a genuine cross-check of evaluate_closed.
//
// Usage: gen_corpus [output-dir]   (default: data/networks)

#include "w6j/spin_network.hpp"
#include "w6j/wigner.hpp"

#include <json.hpp>

#include <array>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

using namespace w6j;

namespace {

HalfInt h2(int t) { return HalfInt::from_twice(t); }

std::string six_name(const std::array<int, 6>& a) {
  std::string s;
  for (int i = 0; i < 6; ++i) {
    if (i) s += '-';
    s += std::to_string(a[i]);
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  std::string outdir = argc > 1 ? argv[1] : "data/networks";
  std::filesystem::create_directories(outdir);

  nlohmann::ordered_json manifest = nlohmann::ordered_json::array();
  auto put = [&](const std::string& name, const SpinNetwork& net, const ExactRadical& value,
                 const std::string& note) {
    std::ofstream file(outdir + "/" + name + ".json");
    file << serialize_network(net);
    nlohmann::ordered_json entry;
    entry["file"] = name + ".json";
    entry["coef_num"] = static_cast<long long>(value.coef().num().get_si());
    entry["coef_den"] = static_cast<long long>(value.coef().den().get_si());
    entry["radicand"] = static_cast<long long>(value.radicand().get_si());
    entry["note"] = note;
    manifest.push_back(entry);
  };

  const std::vector<std::array<int, 6>> tets = {
      {2, 2, 2, 2, 2, 2}, {1, 1, 2, 1, 1, 2}, {2, 3, 5, 3, 2, 4},
      {4, 4, 4, 4, 4, 4}, {3, 3, 4, 3, 3, 2}, {2, 4, 6, 4, 2, 4},
  };

  // Plain tetrahedra: the contraction must reproduce the 6j m-sum.
  for (const auto& a : tets) {
    SixJArgs args{h2(a[0]), h2(a[1]), h2(a[2]), h2(a[3]), h2(a[4]), h2(a[5])};
    put("tetra_" + six_name(a), tetrahedral_network(args), six_j_msum(args), "6j m-sum");
  }

  // A tetrahedron carrying a scalar prefactor.
  {
    SixJArgs args{h2(2), h2(2), h2(2), h2(2), h2(2), h2(2)};
    SpinNetwork net = tetrahedral_network(args);
    net.phase = ExactRadical(Rational(-3, 2), Rational(2));
    put("tetra_phase_2-2-2-2-2-2", net, net.phase * six_j_msum(args),
        "6j m-sum times the stored scalar");
  }

  // Thetas: 1 on valid triads, 0 otherwise.
  put("theta_1-1-2", theta_network(h2(1), h2(1), h2(2)), ExactRadical(1), "valid triad");
  put("theta_2-2-2", theta_network(h2(2), h2(2), h2(2)), ExactRadical(1), "valid triad");
  put("theta_1-1-4", theta_network(h2(1), h2(1), h2(4)), ExactRadical(0),
      "triangle inequality fails");
  put("theta_1-2-2", theta_network(h2(1), h2(2), h2(2)), ExactRadical(0),
      "perimeter not an integer");

  // Loops: 2j+1, and the arrow-reversed variant times (-1)^(2j).
  for (int t = 0; t <= 5; ++t) {
    put("loop_" + std::to_string(t), loop_network(h2(t)), ExactRadical(Rational(t + 1)),
        "loop dimension 2j+1");
  }
  for (int t : {1, 2}) {
    SpinNetwork net = reverse_arrow(loop_network(h2(t)), "a");
    ExactRadical value = Rational((t + 1) * parity_sign(h2(2 * t))) * ExactRadical(1);
    put("loop_rev_" + std::to_string(t), net, value, "loop with one arrow reversed");
  }

  // Arrow corpus: one reversed arrow scales the 6j value by (-1)^(2j).
  const std::array<std::string, 4> picks = {"1a", "12b", "23a", "4b"};
  for (size_t b = 0; b < 5; ++b) {
    const auto& a = tets[b];
    SixJArgs args{h2(a[0]), h2(a[1]), h2(a[2]), h2(a[3]), h2(a[4]), h2(a[5])};
    ExactRadical base = six_j_msum(args);
    for (const std::string& edge : picks) {
      SpinNetwork net = tetrahedral_network(args);
      HalfInt j = net.find_edge(edge)->j;
      put("arrow_" + six_name(a) + "_" + edge, reverse_arrow(net, edge),
          Rational(parity_sign(2 * j)) * base, "tetrahedron with one arrow reversed");
    }
  }

  // Stub corpus: swapping one 2j-node's operands scales by (-1)^(2j).
  const std::array<std::string, 3> stubs = {"k1", "k12", "k23"};
  for (size_t b = 0; b < 2; ++b) {
    const auto& a = tets[b];
    SixJArgs args{h2(a[0]), h2(a[1]), h2(a[2]), h2(a[3]), h2(a[4]), h2(a[5])};
    ExactRadical base = six_j_msum(args);
    for (const std::string& node : stubs) {
      SpinNetwork net = tetrahedral_network(args);
      HalfInt j = net.find_edge(net.find_node(node)->ports[0])->j;
      put("stub_" + six_name(a) + "_" + node, invert_stub(net, node),
          Rational(parity_sign(2 * j)) * base, "tetrahedron with one stub swapped");
    }
  }

  std::ofstream mf(outdir + "/manifest.json");
  mf << manifest.dump(2) << "\n";
  std::cout << "wrote " << manifest.size() << " networks to " << outdir << "\n";
  return 0;
}
