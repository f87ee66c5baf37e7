#include <doctest.h>

#include <cmath>
#include <random>

#include "gnar/graph.hpp"
#include "gnar/network_json.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace gnar;
using testutil::make_net;

namespace {
std::set<NodeId> ids(std::initializer_list<const char*> list) {
  std::set<NodeId> out;
  for (const char* s : list) out.emplace(s);
  return out;
}
}  // namespace

TEST_CASE("node ids") {
  CHECK(NodeId("01001").state() == "01");
  CHECK(normalize_fips("1001") == "01001");
  CHECK(normalize_fips(" \"1001\" ") == "01001");
  CHECK(normalize_fips(normalize_fips("1001")) == normalize_fips("1001"));
  CHECK_THROWS(NodeId("1001"));
  CHECK_THROWS(NodeId("0100a"));
}

TEST_CASE("network construction rejects bad input") {
  CHECK_THROWS_AS(make_net({"01001", "01001"}, {}), std::invalid_argument);
  CHECK_THROWS_AS(make_net({"01001"}, {{"01001", "01001"}}), std::invalid_argument);
  CHECK_THROWS_AS(make_net({"01001", "01002"}, {{"01001", "01002"}, {"01001", "01002"}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_net({"01001"}, {{"01001", "01009"}}), std::invalid_argument);
  CHECK_THROWS_AS(CountyNetwork({NodeId("01001"), NodeId("01002")}, {},
                                {{NodeId("01001"), NodeId("01002"), 0.0, {}}}, WeightMode::binary),
                  std::invalid_argument);
}

TEST_CASE("neighbor_set") {
  const auto tri = testutil::triangle();
  const auto path = testutil::path3();
  CHECK(neighbor_set(tri, ids({"01001"})) == ids({"01002", "01003"}));
  CHECK(neighbor_set(path, ids({"01001"})) == ids({"01002"}));
  CHECK(neighbor_set(tri, ids({"01001", "01002", "01003"})).empty());
  try {
    neighbor_set(tri, ids({"09999"}));
    FAIL("expected out_of_range");
  } catch (const std::out_of_range& e) {
    CHECK(std::string(e.what()).find("09999") != std::string::npos);
  }
}

TEST_CASE("stage_neighbors") {
  const auto path = testutil::path3();
  auto hood = stage_neighbors(path, NodeId("01001"), 2);
  CHECK(hood.stage(1) == ids({"01002"}));
  CHECK(hood.stage(2) == ids({"01003"}));

  auto tri = stage_neighbors(testutil::triangle(), NodeId("01001"), 2);
  CHECK(tri.stage(1) == ids({"01002", "01003"}));
  CHECK(tri.stage(2).empty());

  const auto lattice = triangular_lattice(40, 78);
  CHECK(stage_neighbors(lattice, lattice.node(0), 1).stage(1).size() == 3);
  CHECK_THROWS(stage_neighbor_indices(path, 0, 0));
}

TEST_CASE("stage sets match a relaxation oracle on random digraphs") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 199);
    const double density = 1.5 / n + 0.05 * static_cast<double>(rng() % 3) / 3.0;
    const auto net = oracle::random_network(n, density, rng());
    const std::size_t root = rng() % static_cast<std::size_t>(n);
    const auto dist = oracle::relaxation_distances(net, root);
    const int r_max = 6;
    const auto stages = stage_neighbor_indices(net, root, r_max);
    REQUIRE(stages.size() == static_cast<std::size_t>(r_max));
    for (int r = 1; r <= r_max; ++r) {
      std::vector<std::size_t> expected;
      for (std::size_t k = 0; k < dist.size(); ++k) if (dist[k] == r) expected.push_back(k);
      CHECK(stages[static_cast<std::size_t>(r - 1)] == expected);
    }
  }
}

TEST_CASE("connection weights") {
  const std::vector<NodeId> nodes{NodeId("01001"), NodeId("01002"), NodeId("01003")};
  const CountyNetwork net(nodes, {},
                          {{nodes[0], nodes[1], 2.0, 2.0}, {nodes[0], nodes[2], 3.0, 3.0}},
                          WeightMode::commuters);
  auto w = connection_weights(net, nodes[0], 1);
  CHECK(w.at(nodes[1]) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(w.at(nodes[2]) == doctest::Approx(0.6).epsilon(1e-15));

  auto b = connection_weights(reweight(net, WeightMode::binary), nodes[0], 1);
  CHECK(b.at(nodes[1]) == 0.5);
  CHECK(b.at(nodes[2]) == 0.5);

  const auto path = testutil::path3();
  auto single = connection_weights(path, nodes[0], 1);
  CHECK(single.size() == 1);
  CHECK(single.begin()->second == 1.0);
  CHECK(connection_weights(path, nodes[2], 1).empty());
}

TEST_CASE("weights normalise and ignore uniform rescaling") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto net = oracle::random_network(60, 0.05, seed);
    std::vector<EdgeSpec> scaled = net.edges();
    for (auto& e : scaled) e.mu *= 37.5;
    const CountyNetwork big(net.nodes(), {}, scaled, WeightMode::commuters);
    const auto table = neighbor_table(net, 3);
    const auto big_table = neighbor_table(big, 3);
    for (std::size_t i = 0; i < net.size(); ++i) {
      for (int r = 1; r <= 3; ++r) {
        const auto& row = table[i][static_cast<std::size_t>(r - 1)];
        const auto& big_row = big_table[i][static_cast<std::size_t>(r - 1)];
        REQUIRE(row.size() == big_row.size());
        if (row.empty()) continue;
        double sum = 0.0;
        for (std::size_t k = 0; k < row.size(); ++k) {
          sum += row[k].weight;
          CHECK(row[k].index == big_row[k].index);
          CHECK(std::abs(row[k].weight - big_row[k].weight) <= 1e-12);
        }
        CHECK(std::abs(sum - 1.0) <= 1e-12);
      }
    }
  }
}

TEST_CASE("stage-2 members weigh 1/r") {
  // 1 -> 2 -> 3, 1 -> 4 -> 5: stage 2 of node 1 is {3, 5}, equal weights.
  const auto net = make_net({"01001", "01002", "01003", "01004", "01005"},
                            {{"01001", "01002"}, {"01002", "01003"},
                             {"01001", "01004"}, {"01004", "01005"}});
  auto w = connection_weights(net, NodeId("01001"), 2);
  CHECK(w.size() == 2);
  CHECK(w.at(NodeId("01003")) == 0.5);
}

TEST_CASE("haversine") {
  CHECK(haversine_km(10, 20, 10, 20) == 0.0);
  CHECK(std::abs(haversine_km(0, 0, 0, 180) - 20015.0868) <= 1e-3);
  CHECK(std::abs(haversine_km(0, 0, 90, 0) - 10007.5434) <= 1e-3);
  CHECK_THROWS_AS(haversine_km(91, 0, 0, 0), std::domain_error);
  CHECK_THROWS_AS(haversine_km(0, 0, 0, 181), std::domain_error);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> lat(-90, 90), lon(-180, 180);
  for (int k = 0; k < 500; ++k) {
    const double a1 = lat(rng), o1 = lon(rng), a2 = lat(rng), o2 = lon(rng), a3 = lat(rng), o3 = lon(rng);
    const double ab = haversine_km(a1, o1, a2, o2);
    CHECK(std::abs(ab - haversine_km(a2, o2, a1, o1)) <= 1e-9);
    CHECK(ab <= haversine_km(a1, o1, a3, o3) + haversine_km(a3, o3, a2, o2) + 1e-9);
  }
}

TEST_CASE("reweight") {
  std::vector<NodeId> nodes{NodeId("01001"), NodeId("01002"), NodeId("01003")};
  std::vector<NodeAttrs> attrs(3);
  attrs[0].lat = 41.0; attrs[0].lon = -71.0;
  attrs[1].lat = 42.0; attrs[1].lon = -71.0;
  attrs[2].lat = 41.0; attrs[2].lon = -71.0;
  const CountyNetwork net(nodes, attrs, {{nodes[0], nodes[1], 250, 250}, {nodes[1], nodes[0], 5, 5}},
                          WeightMode::commuters);
  const auto bin = reweight(net, WeightMode::binary);
  for (const auto& e : bin.edges()) CHECK(e.mu == 1.0);
  const auto back = reweight(bin, WeightMode::commuters);
  CHECK(back.edge_weight(0, 1) == 250.0);
  CHECK(back.edge_weight(1, 0) == 5.0);
  const auto km = reweight(net, WeightMode::great_circle_km);
  CHECK(*km.edge_weight(0, 1) == doctest::Approx(haversine_km(41, -71, 42, -71)));

  const CountyNetwork colocated(nodes, attrs, {{nodes[0], nodes[2], 1, 1}}, WeightMode::commuters);
  CHECK_THROWS(reweight(colocated, WeightMode::great_circle_km));
  const auto no_coords = testutil::path3();
  CHECK_THROWS(reweight(no_coords, WeightMode::great_circle_km));
}

TEST_CASE("triangular lattice") {
  auto small = triangular_lattice(2, 2);
  CHECK(small.size() == 4);
  CHECK(small.undirected_adjacency().size() == 4);
  std::size_t half_edges = 0;
  for (const auto& nb : small.undirected_adjacency()) half_edges += nb.size();
  CHECK(half_edges / 2 == 5);

  for (int m = 2; m <= 10; ++m) {
    for (int n = 2; n <= 10; ++n) {
      const auto lat = triangular_lattice(m, n);
      const std::size_t formula = static_cast<std::size_t>(3 * m * n - 2 * m - 2 * n + 1);
      CHECK(lat.directed_edge_count() == 2 * formula);
      CHECK(formula == oracle::lattice_edges_by_enumeration(m, n));
    }
  }
  CHECK(triangular_lattice(40, 78).directed_edge_count() == 2 * 9125);
  CHECK_THROWS(triangular_lattice(1, 5));
}

TEST_CASE("degree histogram") {
  CHECK(degree_histogram(testutil::triangle()) == std::map<std::size_t, std::size_t>{{2, 3}});
  CHECK(degree_histogram(testutil::path3()) == std::map<std::size_t, std::size_t>{{1, 2}, {2, 1}});
  const auto hist = degree_histogram(triangular_lattice(40, 78));
  double total = 0, count = 0;
  for (auto [deg, c] : hist) {
    total += static_cast<double>(deg * c);
    count += static_cast<double>(c);
  }
  CHECK(std::abs(total / count - 5.849) <= 1e-3);
}

TEST_CASE("state extraction") {
  const auto net = make_net({"01001", "02001"}, {{"01001", "02001"}});
  const auto plain = extract_state_subnetwork(net, "01", false);
  CHECK(plain.size() == 1);
  CHECK(plain.directed_edge_count() == 0);
  const auto ext = extract_state_subnetwork(net, "01", true);
  CHECK(ext.size() == 2);
  CHECK(ext.directed_edge_count() == 1);
  CHECK(ext.attrs(ext.index_of(NodeId("02001"))).external);
  CHECK_FALSE(ext.attrs(ext.index_of(NodeId("01001"))).external);

  const auto one = testutil::triangle();
  const auto same = extract_state_subnetwork(one, "01", false);
  CHECK(same.nodes() == one.nodes());
  CHECK(same.directed_edge_count() == one.directed_edge_count());
  CHECK_THROWS(extract_state_subnetwork(one, "44", false));
}

TEST_CASE("network JSON round trip keeps order and hash") {
  const auto net = oracle::random_network(30, 0.1, 11);
  const auto back = network_from_json(network_to_json(net));
  CHECK(back.nodes() == net.nodes());
  CHECK(back.node_order_hash() == net.node_order_hash());
  REQUIRE(back.edges().size() == net.edges().size());
  for (std::size_t k = 0; k < net.edges().size(); ++k) {
    CHECK(back.edges()[k].mu == net.edges()[k].mu);
  }
}
