#include "hopadv/chain.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>

#include "hopadv/errors.hpp"
#include "hopadv/text.hpp"
#include "json.hpp"

namespace hopadv {

using nlohmann::json;

std::string reasoning_type_name(ReasoningType t) {
  switch (t) {
    case ReasoningType::Bridging: return "bridging";
    case ReasoningType::Intersection: return "intersection";
    case ReasoningType::Comparatives: return "comparatives";
    case ReasoningType::YesNo: return "yesno";
  }
  return "unknown";
}

namespace {

// Undirected adjacency over canonical keys; ordered so traversal is
// deterministic.
std::map<std::string, std::vector<std::string>> undirected_adjacency(const EntityGraph& g) {
  std::map<std::string, std::vector<std::string>> adj;
  for (const auto& [key, node] : g.nodes) adj[key];  // ensure isolated nodes exist
  for (const auto& e : g.edges) {
    adj[e.source].push_back(e.target);
    adj[e.target].push_back(e.source);
  }
  for (auto& [key, neighbors] : adj) {
    std::sort(neighbors.begin(), neighbors.end());
    neighbors.erase(std::unique(neighbors.begin(), neighbors.end()), neighbors.end());
  }
  return adj;
}

std::map<std::string, int> bfs_distances(
    const std::map<std::string, std::vector<std::string>>& adj, const std::string& source) {
  std::map<std::string, int> dist;
  std::deque<std::string> queue;
  dist[source] = 0;
  queue.push_back(source);
  while (!queue.empty()) {
    std::string u = queue.front();
    queue.pop_front();
    auto it = adj.find(u);
    if (it == adj.end()) continue;
    for (const auto& v : it->second) {
      if (dist.count(v)) continue;
      dist[v] = dist[u] + 1;
      queue.push_back(v);
    }
  }
  return dist;
}

// Deterministic edge choice for a hop: smallest (locator, relation).
const RelationEdge* pick_edge(const EntityGraph& g, const std::string& a, const std::string& b) {
  const RelationEdge* best = nullptr;
  for (const auto& e : g.edges) {
    bool connects = (e.source == a && e.target == b) || (e.source == b && e.target == a);
    if (!connects) continue;
    if (!best) {
      best = &e;
      continue;
    }
    auto key = [](const RelationEdge& e) {
      return std::make_tuple(e.locator_title, e.locator_sentence, e.relation_phrase);
    };
    if (key(e) < key(*best)) best = &e;
  }
  return best;
}

}  // namespace

std::vector<ReasoningChain> find_chains(const EntityGraph& graph) {
  std::vector<ReasoningChain> chains;
  auto adj = undirected_adjacency(graph);

  std::map<std::string, int> dist_to_answer;
  if (graph.answer_entity) dist_to_answer = bfs_distances(adj, *graph.answer_entity);

  for (const auto& start : graph.query_entities) {
    ReasoningChain chain;
    chain.start = start;
    auto dit = dist_to_answer.find(start);
    if (!graph.answer_entity || dit == dist_to_answer.end()) {
      chains.push_back(std::move(chain));
      continue;
    }
    chain.reaches_answer = true;
    // Walk from the start toward the answer, always stepping to the
    // lexicographically smallest neighbor one hop closer; this realizes
    // the lexicographically smallest shortest path over canonical keys.
    std::string cur = start;
    int remaining = dit->second;
    while (remaining > 0) {
      const std::string* next = nullptr;
      for (const auto& neighbor : adj[cur]) {
        auto nit = dist_to_answer.find(neighbor);
        if (nit == dist_to_answer.end() || nit->second != remaining - 1) continue;
        if (!next || neighbor < *next) next = &neighbor;
      }
      if (!next) break;  // unreachable given dist map; defensive
      const RelationEdge* edge = pick_edge(graph, cur, *next);
      Hop hop;
      hop.from_entity = cur;
      hop.to_entity = *next;
      if (edge) {
        hop.relation_phrase = edge->relation_phrase;
        hop.locator_title = edge->locator_title;
        hop.locator_sentence = edge->locator_sentence;
      }
      chain.hops.push_back(std::move(hop));
      cur = *next;
      --remaining;
    }
    chains.push_back(std::move(chain));
  }
  return chains;
}

ReasoningChain select_primary_chain(const std::vector<ReasoningChain>& chains,
                                    const EntityGraph& graph) {
  const ReasoningChain* best = nullptr;
  for (const auto& c : chains) {
    if (!c.reaches_answer || c.hops.empty()) continue;
    if (!best) {
      best = &c;
      continue;
    }
    if (c.hops.size() > best->hops.size()) {
      best = &c;
    } else if (c.hops.size() == best->hops.size()) {
      auto offset = [&](const ReasoningChain& ch) {
        auto it = graph.query_entity_offsets.find(ch.start);
        return it != graph.query_entity_offsets.end() ? it->second
                                                      : std::numeric_limits<int>::max();
      };
      if (offset(c) < offset(*best)) best = &c;
    }
  }
  if (!best) throw DataError("no-chain");
  return *best;
}

std::vector<std::string> serialize_chain(const ReasoningChain& chain) {
  std::vector<std::string> out;
  out.push_back(kHop1Marker);
  auto append_text = [&](const std::string& s) {
    for (auto& tok : text::split_ws(text::lower(s))) out.push_back(std::move(tok));
  };
  if (!chain.hops.empty()) {
    append_text(chain.hops[0].from_entity);
    append_text(chain.hops[0].relation_phrase);
  }
  out.push_back(kHop2Marker);
  for (size_t i = 1; i < chain.hops.size(); ++i) {
    append_text(chain.hops[i].from_entity);
    append_text(chain.hops[i].relation_phrase);
  }
  return out;
}

SerializedChain parse_chain_tokens(const std::vector<std::string>& tokens) {
  if (tokens.empty() || tokens[0] != kHop1Marker)
    throw DataError("chain tokens must begin with " + std::string(kHop1Marker));
  SerializedChain parts;
  size_t i = 1;
  for (; i < tokens.size() && tokens[i] != kHop2Marker; ++i) parts.hop1_tokens.push_back(tokens[i]);
  if (i == tokens.size())
    throw DataError("chain tokens are missing the " + std::string(kHop2Marker) + " marker");
  for (++i; i < tokens.size(); ++i) {
    if (tokens[i] == kHop1Marker || tokens[i] == kHop2Marker)
      throw DataError("unexpected chain marker in tail");
    parts.tail_tokens.push_back(tokens[i]);
  }
  return parts;
}

std::vector<std::string> serialize_chain_tokens(const SerializedChain& parts) {
  std::vector<std::string> out;
  out.push_back(kHop1Marker);
  out.insert(out.end(), parts.hop1_tokens.begin(), parts.hop1_tokens.end());
  out.push_back(kHop2Marker);
  out.insert(out.end(), parts.tail_tokens.begin(), parts.tail_tokens.end());
  return out;
}

ReasoningType classify_comparison(const Example& ex) {
  std::string folded = text::lower(ex.answer);
  return (folded == "yes" || folded == "no") ? ReasoningType::YesNo : ReasoningType::Comparatives;
}

std::string chain_to_json(const ReasoningChain& chain, ReasoningType type) {
  json hops = json::array();
  for (const auto& h : chain.hops)
    hops.push_back(json{{"from", h.from_entity},
                        {"relation", h.relation_phrase},
                        {"to", h.to_entity},
                        {"sentence", json::array({h.locator_title, h.locator_sentence})}});
  std::string serialized;
  for (const auto& tok : serialize_chain(chain)) {
    if (!serialized.empty()) serialized += ' ';
    serialized += tok;
  }
  return json{{"start", chain.start},
              {"reaches_answer", chain.reaches_answer},
              {"hops", std::move(hops)},
              {"serialized", std::move(serialized)},
              {"type", reasoning_type_name(type)}}
      .dump();
}

}  // namespace hopadv
