// Stallings folding of finitely generated subgroups of a free group, with
// edge labels recording how each edge is spelled in the subgroup
// generators. This gives constructive membership.
#pragma once

#include <optional>
#include <vector>

#include "sphmach/word.hpp"

namespace sphmach {

class SubgroupGraph {
 public:
  // gens are reduced words over letters 1..rank.
  SubgroupGraph(std::vector<Word> const& gens, int rank);

  // target as a word in the generators (letter j = gens[j-1]), if a member
  std::optional<Word> express(Word const& target) const;
  bool contains(Word const& target) const { return express(target).has_value(); }

  std::size_t vertex_count() const noexcept { return vertices_; }
  // a word leading from the base vertex to each vertex (breadth first)
  std::vector<Word> vertex_paths() const;
  // the index when the folded graph is a finite cover, else absent
  std::optional<std::size_t> index() const;

 private:
  struct Edge {
    int from;
    int to;
    Letter letter;  // positive
    Word label;
  };
  int rank_;
  std::size_t vertices_ = 0;
  std::vector<Edge> edges_;
  // out_[v][a-1], in_[v][a-1]: edge index or -1
  std::vector<std::vector<int>> out_;
  std::vector<std::vector<int>> in_;
};

std::optional<Word> express_in_subgroup(std::vector<Word> const& gens,
                                        Word const& target);

}  // namespace sphmach
