#include "sphmach/folding.hpp"

#include <map>
#include <stdexcept>
#include <utility>

namespace sphmach {

namespace {

struct RawEdge {
  int from;
  int to;
  Letter letter;
  Word label;
  bool alive = true;
};

class Folder {
 public:
  std::vector<RawEdge> edges;
  std::vector<std::vector<int>> inc;
  std::vector<bool> alive_vertex;

  int add_vertex() {
    inc.emplace_back();
    alive_vertex.push_back(true);
    return static_cast<int>(inc.size()) - 1;
  }

  void add_edge(int from, int to, Letter a, Word label) {
    edges.push_back({from, to, a, std::move(label)});
    int e = static_cast<int>(edges.size()) - 1;
    inc[from].push_back(e);
    if (to != from) {
      inc[to].push_back(e);
    }
  }

  // Merge vertex r into k; c relabels so potentials stay consistent.
  void merge(int k, int r, Word const& c) {
    Word ci = c.inverse();
    for (int e : inc[r]) {
      RawEdge& E = edges[e];
      if (!E.alive || (E.from != r && E.to != r)) {
        continue;
      }
      if (E.from == r && E.to == r) {
        E.label = c * E.label * ci;
        E.from = E.to = k;
      } else if (E.from == r) {
        E.label = c * E.label;
        E.from = k;
      } else {
        E.label = E.label * ci;
        E.to = k;
      }
      inc[k].push_back(e);
    }
    inc[r].clear();
    alive_vertex[r] = false;
  }

  // One fold at v if available. Returns the vertices touched.
  std::optional<std::pair<int, int>> fold_at(int v) {
    std::map<std::pair<Letter, int>, int> seen;
    for (int e : inc[v]) {
      RawEdge const& E = edges[e];
      if (!E.alive || (E.from != v && E.to != v)) {
        continue;
      }
      for (int dir = 0; dir < 2; ++dir) {
        if ((dir == 0 && E.from != v) || (dir == 1 && E.to != v)) {
          continue;
        }
        auto [it, fresh] = seen.emplace(std::make_pair(E.letter, dir), e);
        if (fresh || it->second == e) {
          continue;
        }
        int e1 = it->second;
        int e2 = e;
        RawEdge& A = edges[e1];
        RawEdge& B = edges[e2];
        int t1 = dir == 0 ? A.to : A.from;
        int t2 = dir == 0 ? B.to : B.from;
        if (t1 == t2) {
          B.alive = false;
          return std::make_pair(t1, t1);
        }
        int k = std::min(t1, t2);
        int r = std::max(t1, t2);
        Word const& Lk = (k == t1) ? A.label : B.label;
        Word const& Lr = (k == t1) ? B.label : A.label;
        Word c = dir == 0 ? Lk.inverse() * Lr : Lk * Lr.inverse();
        int dup = (k == t1) ? e2 : e1;
        edges[dup].alive = false;
        merge(k, r, c);
        return std::make_pair(k, v);
      }
    }
    return std::nullopt;
  }

  void fold_all() {
    std::vector<int> work;
    for (int v = 0; v < static_cast<int>(inc.size()); ++v) {
      work.push_back(v);
    }
    while (!work.empty()) {
      int v = work.back();
      work.pop_back();
      if (!alive_vertex[v]) {
        continue;
      }
      if (auto touched = fold_at(v)) {
        work.push_back(v);
        work.push_back(touched->first);
        if (alive_vertex[touched->second]) {
          work.push_back(touched->second);
        }
      }
    }
  }
};

}  // namespace

SubgroupGraph::SubgroupGraph(std::vector<Word> const& gens, int rank)
    : rank_(rank) {
  Folder f;
  f.add_vertex();
  for (std::size_t j = 0; j < gens.size(); ++j) {
    Word const& w = gens[j];
    if (w.max_generator() > rank) {
      throw std::out_of_range("SubgroupGraph: generator outside the free basis");
    }
    if (w.empty()) {
      continue;
    }
    Letter xj = static_cast<Letter>(j + 1);
    int cur = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      int next = (i + 1 == w.size()) ? 0 : f.add_vertex();
      Word label = i == 0 ? Word({xj}) : Word();
      Letter a = w[i];
      if (a > 0) {
        f.add_edge(cur, next, a, std::move(label));
      } else {
        f.add_edge(next, cur, -a, label.inverse());
      }
      cur = next;
    }
  }
  f.fold_all();

  std::vector<int> id(f.inc.size(), -1);
  for (std::size_t v = 0; v < f.inc.size(); ++v) {
    if (f.alive_vertex[v]) {
      id[v] = static_cast<int>(vertices_++);
    }
  }
  out_.assign(vertices_, std::vector<int>(rank_, -1));
  in_.assign(vertices_, std::vector<int>(rank_, -1));
  for (auto const& E : f.edges) {
    if (!E.alive) {
      continue;
    }
    int e = static_cast<int>(edges_.size());
    edges_.push_back({id[E.from], id[E.to], E.letter, E.label});
    out_[id[E.from]][E.letter - 1] = e;
    in_[id[E.to]][E.letter - 1] = e;
  }
}

std::optional<Word> SubgroupGraph::express(Word const& target) const {
  if (target.max_generator() > rank_) {
    return std::nullopt;
  }
  int cur = 0;
  Word result;
  for (Letter a : target.letters()) {
    if (a > 0) {
      int e = out_[cur][a - 1];
      if (e < 0) {
        return std::nullopt;
      }
      result *= edges_[e].label;
      cur = edges_[e].to;
    } else {
      int e = in_[cur][-a - 1];
      if (e < 0) {
        return std::nullopt;
      }
      result *= edges_[e].label.inverse();
      cur = edges_[e].from;
    }
  }
  if (cur != 0) {
    return std::nullopt;
  }
  return result;
}

std::vector<Word> SubgroupGraph::vertex_paths() const {
  std::vector<std::optional<Word>> path(vertices_);
  path[0] = Word();
  std::vector<int> queue{0};
  for (std::size_t q = 0; q < queue.size(); ++q) {
    int v = queue[q];
    for (int a = 0; a < rank_; ++a) {
      if (int e = out_[v][a]; e >= 0 && !path[edges_[e].to]) {
        path[edges_[e].to] = *path[v] * Word({a + 1});
        queue.push_back(edges_[e].to);
      }
      if (int e = in_[v][a]; e >= 0 && !path[edges_[e].from]) {
        path[edges_[e].from] = *path[v] * Word({-(a + 1)});
        queue.push_back(edges_[e].from);
      }
    }
  }
  std::vector<Word> out;
  for (auto& p : path) {
    out.push_back(p.value_or(Word()));
  }
  return out;
}

std::optional<std::size_t> SubgroupGraph::index() const {
  for (std::size_t v = 0; v < vertices_; ++v) {
    for (int a = 0; a < rank_; ++a) {
      if (out_[v][a] < 0 || in_[v][a] < 0) {
        return std::nullopt;
      }
    }
  }
  return vertices_;
}

std::optional<Word> express_in_subgroup(std::vector<Word> const& gens,
                                        Word const& target) {
  int rank = target.max_generator();
  for (auto const& g : gens) {
    rank = std::max(rank, g.max_generator());
  }
  return SubgroupGraph(gens, rank).express(target);
}

}  // namespace sphmach
