#include "egoscene/narration.hpp"

#include <algorithm>
#include <set>

namespace egoscene {

namespace {

struct Edge {
  std::size_t u, v;
  bool real;
};

struct Incidence {
  std::size_t neighbour;
  std::size_t edge;
};

std::size_t other_end(const Edge& e, std::size_t from) noexcept {
  return e.u == from ? e.v : e.u;
}

// Hierholzer's algorithm. Returns the edge sequence of an Eulerian trail
// starting at `start`, assuming one exists over the unused edges reachable
// from it. Neighbour lists must be sorted for deterministic output.
std::vector<std::pair<std::size_t, std::size_t>> hierholzer(
    std::size_t start, const std::vector<Edge>& edges,
    const std::vector<std::vector<Incidence>>& incident, std::vector<char>& used) {
  std::vector<std::size_t> cursor(incident.size(), 0);
  struct Frame {
    std::size_t vertex;
    std::size_t via;  // edge used to arrive; npos for the start
  };
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<Frame> stack{{start, kNone}};
  // (edge, vertex it was entered from), collected in reverse.
  std::vector<std::pair<std::size_t, std::size_t>> reversed;
  while (!stack.empty()) {
    const std::size_t v = stack.back().vertex;
    auto& cur = cursor[v];
    while (cur < incident[v].size() && used[incident[v][cur].edge]) ++cur;
    if (cur < incident[v].size()) {
      const Incidence inc = incident[v][cur];
      used[inc.edge] = 1;
      stack.push_back({inc.neighbour, inc.edge});
    } else {
      const Frame f = stack.back();
      stack.pop_back();
      if (f.via != kNone) reversed.emplace_back(f.via, other_end(edges[f.via], f.vertex));
    }
  }
  std::reverse(reversed.begin(), reversed.end());
  return reversed;
}

}  // namespace

std::vector<Trail> euler_trails(const FieldAdjacency& adj) {
  const std::size_t n = adj.size();
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (adj.cell(i, j)) edges.push_back({i, j, true});
  std::vector<Trail> trails;
  if (edges.empty()) return trails;

  std::vector<std::size_t> degree(n, 0);
  for (const Edge& e : edges) {
    ++degree[e.u];
    ++degree[e.v];
  }

  // Connected components over the vertices that carry edges, in id order.
  std::vector<int> component(n, -1);
  std::vector<std::vector<std::size_t>> components;
  {
    std::vector<std::vector<std::size_t>> nbrs(n);
    for (const Edge& e : edges) {
      nbrs[e.u].push_back(e.v);
      nbrs[e.v].push_back(e.u);
    }
    for (std::size_t s = 0; s < n; ++s) {
      if (degree[s] == 0 || component[s] >= 0) continue;
      const int c = static_cast<int>(components.size());
      components.emplace_back();
      std::vector<std::size_t> todo{s};
      component[s] = c;
      while (!todo.empty()) {
        const std::size_t v = todo.back();
        todo.pop_back();
        components[c].push_back(v);
        for (std::size_t w : nbrs[v])
          if (component[w] < 0) {
            component[w] = c;
            todo.push_back(w);
          }
      }
      std::sort(components[c].begin(), components[c].end());
    }
  }

  // Pair up odd vertices inside each component with virtual edges so every
  // component becomes Eulerian; cutting the circuit at those edges yields the
  // minimum trail cover.
  std::vector<std::size_t> first_odd(components.size(), static_cast<std::size_t>(-1));
  std::vector<std::size_t> odd_count(components.size(), 0);
  for (std::size_t c = 0; c < components.size(); ++c) {
    std::vector<std::size_t> odd;
    for (std::size_t v : components[c])
      if (degree[v] % 2 == 1) odd.push_back(v);
    odd_count[c] = odd.size();
    if (!odd.empty()) first_odd[c] = odd.front();
    if (odd.size() > 2)
      for (std::size_t k = 0; k + 1 < odd.size(); k += 2) edges.push_back({odd[k], odd[k + 1], false});
  }

  std::vector<std::vector<Incidence>> incident(n);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    incident[edges[e].u].push_back({edges[e].v, e});
    incident[edges[e].v].push_back({edges[e].u, e});
  }
  for (auto& list : incident)
    std::sort(list.begin(), list.end(), [](const Incidence& a, const Incidence& b) {
      return a.neighbour != b.neighbour ? a.neighbour < b.neighbour : a.edge < b.edge;
    });

  auto step_for = [&](std::size_t edge, std::size_t from) {
    const Edge& e = edges[edge];
    const std::size_t to = other_end(e, from);
    return TrailStep{adj.region_ids()[from], adj.region_ids()[to], *adj.relation(e.u, e.v)};
  };

  std::vector<char> used(edges.size(), 0);
  for (std::size_t c = 0; c < components.size(); ++c) {
    const std::size_t start = odd_count[c] > 0 ? first_odd[c] : components[c].front();
    auto walk = hierholzer(start, edges, incident, used);
    if (odd_count[c] <= 2) {
      Trail t;
      for (const auto& [edge, from] : walk) t.push_back(step_for(edge, from));
      trails.push_back(std::move(t));
      continue;
    }
    // Closed walk with virtual edges: rotate to begin after one, then split.
    auto first_virtual = std::find_if(walk.begin(), walk.end(),
                                      [&](const auto& s) { return !edges[s.first].real; });
    std::rotate(walk.begin(), first_virtual + 1, walk.end());
    Trail t;
    for (const auto& [edge, from] : walk) {
      if (!edges[edge].real) {
        if (!t.empty()) trails.push_back(std::move(t));
        t.clear();
        continue;
      }
      t.push_back(step_for(edge, from));
    }
    if (!t.empty()) trails.push_back(std::move(t));
  }
  return trails;
}

std::string_view relation_phrase(RelationKind k) noexcept {
  switch (k) {
    case RelationKind::kInFrontOf: return "in front of";
    case RelationKind::kBehind: return "behind";
    case RelationKind::kOn: return "on";
    case RelationKind::kAbove: return "above";
    case RelationKind::kUnder: return "under";
    case RelationKind::kNextTo: return "next to";
  }
  return "next to";
}

std::string_view field_header(DirectionField f) noexcept {
  switch (f) {
    case DirectionField::kLeft: return "On your left";
    case DirectionField::kFront: return "In front of you";
    case DirectionField::kRight: return "On your right";
  }
  return "In front of you";
}

std::string render_relation(const Relation& rel, const CaptionMap& captions) {
  auto subject = captions.find(rel.subject);
  auto object = captions.find(rel.object);
  if (subject == captions.end() || object == captions.end())
    throw Error(ErrorKind::kNotFound,
                "no caption for segment " +
                    std::to_string(subject == captions.end() ? rel.subject : rel.object));
  std::string s = subject->second;
  s += " is ";
  s += relation_phrase(rel.kind);
  s += ' ';
  s += object->second;
  s += '.';
  return s;
}

SceneDescription compose_scene(const NarrationInput& input) {
  constexpr std::array<DirectionField, 3> kOrder = {DirectionField::kLeft, DirectionField::kFront,
                                                    DirectionField::kRight};
  auto caption_of = [&](SegmentId id) -> const std::string& {
    auto it = input.captions.find(id);
    if (it == input.captions.end())
      throw Error(ErrorKind::kConsistency, "segment " + std::to_string(id) + " has no caption");
    return it->second;
  };

  SceneDescription out;
  std::vector<std::string> lines;
  for (std::size_t f = 0; f < kOrder.size(); ++f) {
    const auto& members = input.members[f];
    const std::set<SegmentId> known(members.begin(), members.end());
    auto& sentences = out.field_sentences[f];
    if (!members.empty()) {
      std::string header(field_header(kOrder[f]));
      header += ": ";
      for (std::size_t i = 0; i < members.size(); ++i) {
        if (i) header += ", ";
        header += caption_of(members[i]);
      }
      header += '.';
      sentences.push_back(std::move(header));
    }
    for (const Trail& trail : input.trails[f]) {
      for (const TrailStep& step : trail) {
        if (!known.count(step.relation.subject) || !known.count(step.relation.object))
          throw Error(ErrorKind::kConsistency,
                      "trail edge " + std::to_string(step.relation.subject) + "-" +
                          std::to_string(step.relation.object) + " leaves the " +
                          std::string(to_string(kOrder[f])) + " field");
        sentences.push_back(render_relation(step.relation, input.captions));
      }
    }
    lines.insert(lines.end(), sentences.begin(), sentences.end());
  }
  if (input.ground) {
    out.ground_sentence = caption_of(*input.ground) + " is the ground.";
    lines.push_back(out.ground_sentence);
  }
  if (input.background) {
    out.background_sentence = caption_of(*input.background) + " is in the background.";
    lines.push_back(out.background_sentence);
  }
  for (const std::string& l : lines) {
    out.full_text += l;
    out.full_text += '\n';
  }
  return out;
}

}  // namespace egoscene
