#include <deque>
#include <random>

#include "doctest.h"
#include "hopadv/chain.hpp"
#include "hopadv/errors.hpp"

using namespace hopadv;

namespace {

EntityGraph graph_from_edges(const std::vector<std::pair<std::string, std::string>>& edges,
                             const std::set<std::string>& query,
                             const std::string& answer) {
  EntityGraph g;
  auto node = [&](const std::string& key) {
    EntityNode& n = g.nodes[key];
    n.canonical_key = key;
    n.surfaces.insert(key);
  };
  int serial = 0;
  for (const auto& [a, b] : edges) {
    node(a);
    node(b);
    RelationEdge e;
    e.source = a;
    e.target = b;
    e.relation_phrase = "rel" + std::to_string(serial++);
    e.locator_title = "P";
    e.locator_sentence = serial;
    g.edges.push_back(std::move(e));
  }
  int offset = 0;
  for (const auto& q : query) {
    node(q);
    g.query_entities.insert(q);
    g.query_entity_offsets[q] = offset;
    offset += 10;
  }
  node(answer);
  g.answer_entity = answer;
  return g;
}

// Plain queue BFS used as the independent distance oracle.
int bfs_oracle(const EntityGraph& g, const std::string& from, const std::string& to) {
  std::map<std::string, std::vector<std::string>> adj;
  for (const auto& e : g.edges) {
    adj[e.source].push_back(e.target);
    adj[e.target].push_back(e.source);
  }
  std::map<std::string, int> dist{{from, 0}};
  std::deque<std::string> queue{from};
  while (!queue.empty()) {
    auto u = queue.front();
    queue.pop_front();
    if (u == to) return dist[u];
    for (const auto& v : adj[u])
      if (!dist.count(v)) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
  }
  return -1;
}

}  // namespace

TEST_CASE("two-hop chain over the worked example") {
  EntityGraph g = graph_from_edges({{"honolulu", "hawaii"}, {"laysan", "honolulu"}},
                                   {"hawaii"}, "laysan");
  auto chains = find_chains(g);
  REQUIRE(chains.size() == 1);
  CHECK(chains[0].reaches_answer);
  REQUIRE(chains[0].hops.size() == 2);
  CHECK(chains[0].hops[0].from_entity == "hawaii");
  CHECK(chains[0].hops[0].to_entity == "honolulu");
  CHECK(chains[0].hops[1].to_entity == "laysan");
}

TEST_CASE("query entity equal to the answer is a zero-hop chain, never primary") {
  EntityGraph g = graph_from_edges({{"a", "b"}}, {"a"}, "a");
  auto chains = find_chains(g);
  REQUIRE(chains.size() == 1);
  CHECK(chains[0].reaches_answer);
  CHECK(chains[0].hops.empty());
  CHECK_THROWS_AS(select_primary_chain(chains, g), DataError);
}

TEST_CASE("absent answer yields unreachable chains and no primary") {
  EntityGraph g = graph_from_edges({{"a", "b"}}, {"a"}, "z");
  g.answer_entity.reset();
  auto chains = find_chains(g);
  REQUIRE(chains.size() == 1);
  CHECK_FALSE(chains[0].reaches_answer);
  CHECK(chains[0].hops.empty());
  CHECK_THROWS_WITH_AS(select_primary_chain(chains, g), "no-chain", DataError);
}

TEST_CASE("primary selection prefers the longest, then the earliest mention") {
  EntityGraph g = graph_from_edges(
      {{"q1", "b"}, {"b", "ans"}, {"q2", "ans"}}, {"q1", "q2"}, "ans");
  // q1: 2 hops, q2: 1 hop
  auto chains = find_chains(g);
  ReasoningChain primary = select_primary_chain(chains, g);
  CHECK(primary.start == "q1");

  // equal lengths: earliest question offset wins
  EntityGraph g2 = graph_from_edges({{"q1", "ans"}, {"q2", "ans"}}, {"q1", "q2"}, "ans");
  g2.query_entity_offsets["q1"] = 10;
  g2.query_entity_offsets["q2"] = 3;
  ReasoningChain primary2 = select_primary_chain(find_chains(g2), g2);
  CHECK(primary2.start == "q2");
}

TEST_CASE("chain selection matches a brute-force BFS oracle on random graphs") {
  std::mt19937_64 rng(20240601);
  int cases = 0;
  while (cases < 1200) {
    int n = 3 + static_cast<int>(rng() % 10);  // up to 12 nodes
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back("n" + std::to_string(i));
    std::vector<std::pair<std::string, std::string>> edges;
    int m = static_cast<int>(rng() % (2 * n + 1));
    for (int e = 0; e < m; ++e) {
      std::string a = names[rng() % n], b = names[rng() % n];
      if (a != b) edges.emplace_back(a, b);
    }
    std::string answer = names[rng() % n];
    std::set<std::string> query{names[rng() % n]};
    EntityGraph g = graph_from_edges(edges, query, answer);
    ++cases;

    auto chains = find_chains(g);
    REQUIRE(chains.size() == 1);
    const ReasoningChain& chain = chains[0];
    int expected = bfs_oracle(g, *query.begin(), answer);
    if (expected < 0) {
      CHECK_FALSE(chain.reaches_answer);
    } else {
      CHECK(chain.reaches_answer);
      CHECK(static_cast<int>(chain.hops.size()) == expected);
      // consecutive hops and valid endpoints
      for (size_t h = 1; h < chain.hops.size(); ++h)
        CHECK(chain.hops[h].from_entity == chain.hops[h - 1].to_entity);
      // deterministic under repetition
      auto again = find_chains(g);
      REQUIRE(again.size() == 1);
      CHECK(again[0].hops.size() == chain.hops.size());
      for (size_t h = 0; h < chain.hops.size(); ++h)
        CHECK(again[0].hops[h].to_entity == chain.hops[h].to_entity);
    }
  }
}

TEST_CASE("tie-break picks the lexicographically smallest shortest path") {
  // two parallel 2-hop routes a-b-d and a-c-d
  EntityGraph g = graph_from_edges({{"a", "c"}, {"a", "b"}, {"b", "d"}, {"c", "d"}},
                                   {"a"}, "d");
  auto chains = find_chains(g);
  REQUIRE(chains.size() == 1);
  REQUIRE(chains[0].hops.size() == 2);
  CHECK(chains[0].hops[0].to_entity == "b");
}

TEST_CASE("serialization of the worked chain") {
  EntityGraph g = graph_from_edges({{"honolulu", "hawaii"}, {"laysan", "honolulu"}},
                                   {"hawaii"}, "laysan");
  g.edges[0].relation_phrase = "capital";
  g.edges[1].relation_phrase = "located 808 nmi northwest";
  auto chain = select_primary_chain(find_chains(g), g);
  auto tokens = serialize_chain(chain);
  std::vector<std::string> expected = {"[HOP1]", "hawaii", "capital",
                                       "[HOP2]", "honolulu", "located", "808", "nmi", "northwest"};
  CHECK(tokens == expected);
}

TEST_CASE("one-hop chains serialize with an empty tail") {
  ReasoningChain chain;
  chain.start = "ent";
  chain.reaches_answer = true;
  chain.hops.push_back({"ent", "ans", "rel", "P", 0});
  auto tokens = serialize_chain(chain);
  CHECK(tokens == std::vector<std::string>{"[HOP1]", "ent", "rel", "[HOP2]"});
}

TEST_CASE("three-hop chains merge the later hops after the second marker") {
  ReasoningChain chain;
  chain.start = "a";
  chain.reaches_answer = true;
  chain.hops.push_back({"a", "b", "r1", "P", 0});
  chain.hops.push_back({"b", "c", "r2", "P", 1});
  chain.hops.push_back({"c", "d", "r3", "P", 2});
  auto tokens = serialize_chain(chain);
  CHECK(tokens == std::vector<std::string>{"[HOP1]", "a", "r1", "[HOP2]", "b", "r2", "c", "r3"});
}

TEST_CASE("serialize-parse round trip on random chains") {
  std::mt19937_64 rng(99);
  for (int iter = 0; iter < 200; ++iter) {
    ReasoningChain chain;
    chain.start = "e0";
    chain.reaches_answer = true;
    int hops = 1 + static_cast<int>(rng() % 4);
    for (int h = 0; h < hops; ++h)
      chain.hops.push_back({"e" + std::to_string(h), "e" + std::to_string(h + 1),
                            "rel " + std::to_string(rng() % 10), "P", h});
    auto tokens = serialize_chain(chain);
    SerializedChain parts = parse_chain_tokens(tokens);
    CHECK(serialize_chain_tokens(parts) == tokens);
  }
  CHECK_THROWS_AS(parse_chain_tokens({"nope"}), DataError);
  CHECK_THROWS_AS(parse_chain_tokens({"[HOP1]", "x"}), DataError);
}

TEST_CASE("comparison classification is case-folded") {
  Example ex;
  ex.type_tag = "comparison";
  ex.answer = "yes";
  CHECK(classify_comparison(ex) == ReasoningType::YesNo);
  ex.answer = "No";
  CHECK(classify_comparison(ex) == ReasoningType::YesNo);
  ex.answer = "Laysan";
  CHECK(classify_comparison(ex) == ReasoningType::Comparatives);
}
