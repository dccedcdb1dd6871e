#include "sphmach/mcbiset.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

#include "sphmach/folding.hpp"
#include "sphmach/pillowcase.hpp"

namespace sphmach {

std::vector<Permutation> Distillation::permutations() const {
  std::vector<Permutation> out;
  for (std::size_t i = 0; i + degree <= perm_code.size() && degree > 0;
       i += degree) {
    out.emplace_back(std::vector<int>(perm_code.begin() + i,
                                      perm_code.begin() + i + degree));
  }
  return out;
}

CanonicalForm canonical_form(SphereMachine const& M) {
  M.require_relator();
  std::size_t d = M.degree();
  int n = M.source().size();
  auto perms = M.permutations();
  if (!is_transitive(perms, d)) {
    throw MalformedMachine("distill: machine is not transitive");
  }
  // cycle classes, independent of the relabeling
  std::vector<std::vector<std::pair<std::vector<int>, ConjClass>>> cyc(n);
  for (int i = 0; i < n; ++i) {
    auto const& row = M.rows()[i];
    for (auto const& c : row.perm.cycles()) {
      Word h;
      for (int x : c) {
        h *= row.entries[x];
      }
      cyc[i].emplace_back(c, ConjClass::of(M.target(), h));
    }
  }
  CanonicalForm best;
  bool have = false;
  for (std::size_t p = 0; p < d; ++p) {
    std::vector<int> lab(d, -1);
    std::vector<int> order{static_cast<int>(p)};
    lab[p] = 0;
    for (std::size_t q = 0; q < order.size(); ++q) {
      for (int i = 0; i < n; ++i) {
        int y = perms[i](order[q]);
        if (lab[y] < 0) {
          lab[y] = static_cast<int>(order.size());
          order.push_back(y);
        }
      }
    }
    Distillation D;
    D.degree = d;
    D.perm_code.reserve(d * n);
    for (int i = 0; i < n; ++i) {
      for (std::size_t q = 0; q < d; ++q) {
        D.perm_code.push_back(lab[perms[i](order[q])]);
      }
    }
    if (have && D.perm_code > best.key.perm_code) {
      continue;
    }
    for (int i = 0; i < n; ++i) {
      std::vector<std::pair<int, ConjClass>> v;
      for (auto const& [c, cls] : cyc[i]) {
        int m = static_cast<int>(d);
        for (int x : c) {
          m = std::min(m, lab[x]);
        }
        v.emplace_back(m, cls);
      }
      std::sort(v.begin(), v.end());
      std::vector<ConjClass> row;
      for (auto& [m, cls] : v) {
        row.push_back(cls);
      }
      D.labels.push_back(std::move(row));
    }
    if (!have || D < best.key) {
      best.key = std::move(D);
      best.relabelings = {Permutation(lab)};
      have = true;
    } else if (D == best.key) {
      best.relabelings.emplace_back(lab);
    }
  }
  return best;
}

Distillation distill(SphereMachine const& M) { return canonical_form(M).key; }

namespace {

// automorphism m of H with m(entries of N1) = entries of N2, if any
std::optional<Automorphism> match_entries(SphereMachine const& N1,
                                          SphereMachine const& N2) {
  SphereGroup const& H = N1.target();
  std::vector<Word> xs;
  std::vector<Word> ys;
  std::map<Word, Word> seen;
  for (std::size_t i = 0; i < N1.rows().size(); ++i) {
    auto const& a = N1.rows()[i].entries;
    auto const& b = N2.rows()[i].entries;
    for (std::size_t s = 0; s < a.size(); ++s) {
      if (a[s].empty()) {
        if (!b[s].empty()) {
          return std::nullopt;
        }
        continue;
      }
      auto [it, fresh] = seen.emplace(a[s], b[s]);
      if (!fresh) {
        if (it->second != b[s]) {
          return std::nullopt;
        }
        continue;
      }
      xs.push_back(a[s]);
      ys.push_back(b[s]);
    }
  }
  if (H.size() == 0) {
    return Automorphism(H, {});
  }
  SubgroupGraph graph(xs, H.rank());
  std::vector<Word> im;
  Word prod;
  for (int j = 1; j <= H.rank(); ++j) {
    auto e = graph.express(Word::generator(j));
    if (!e) {
      return std::nullopt;
    }
    im.push_back(substitute(*e, ys));
    prod *= im.back();
  }
  im.push_back(prod.inverse());
  Automorphism m(H, std::move(im));
  if (post_compose(N1, m) != N2) {
    return std::nullopt;
  }
  return m;
}

}  // namespace

std::optional<OrbitWitness> same_left_orbit(SphereMachine const& M1,
                                            SphereMachine const& M2) {
  if (!(M1.source() == M2.source()) || !(M1.target() == M2.target()) ||
      M1.degree() != M2.degree()) {
    return std::nullopt;
  }
  auto c1 = canonical_form(M1);
  auto c2 = canonical_form(M2);
  if (!(c1.key == c2.key)) {
    return std::nullopt;
  }
  SphereGroup const& H = M1.target();
  auto [N2, b2] = normalize(M2);
  Permutation const& r1 = c1.relabelings.front();
  for (auto const& r2 : c2.relabelings) {
    Permutation rho = r1 * r2.inverse();
    SphereMachine M1r = relabel(M1, rho);
    auto [N1, b1] = normalize(M1r);
    auto m = match_entries(N1, N2);
    if (!m || !is_peripheral_preserving(*m, H)) {
      continue;
    }
    try {
      (void)inverse(*m, H);
    } catch (std::domain_error const&) {
      continue;
    }
    BasisChange change{std::vector<Word>(M1.degree()), rho};
    for (std::size_t s = 0; s < M1.degree(); ++s) {
      change.conjugators[s] =
          m->apply(b1.conjugators[s]) * b2.conjugators[s].inverse();
    }
    if (change_basis(post_compose(M1, *m), change) != M2) {
      continue;
    }
    return OrbitWitness{std::move(*m), std::move(change)};
  }
  return std::nullopt;
}

SphereGroup free_alphabet_group(std::vector<std::string> const& names) {
  auto v = names;
  v.push_back("_free");
  return SphereGroup(std::move(v));
}

bool MappingClassBiset::has_words() const {
  for (auto const& row : table) {
    for (auto const& t : row) {
      if (!t.word) {
        return false;
      }
    }
  }
  return true;
}

std::optional<int> MappingClassBiset::gen_index(std::string const& name) const {
  for (std::size_t g = 0; g < gen_names.size(); ++g) {
    if (gen_names[g] == name) {
      return static_cast<int>(g + 1);
    }
  }
  return std::nullopt;
}

std::string MappingClassBiset::format_word(Word const& w) const {
  return free_alphabet ? acting.format(w) : acting.pretty(w);
}

Permutation MappingClassBiset::action(int g) const {
  std::vector<int> img;
  for (auto const& t : table.at(g - 1)) {
    img.push_back(t.next);
  }
  return Permutation(std::move(img));
}

MappingClassBiset compute_mcbiset(SphereMachine const& M,
                                  std::vector<NamedMap> const& gens,
                                  McbOptions const& opt) {
  require_sphere(M);
  MappingClassBiset mcb;
  for (auto const& g : gens) {
    if (!is_peripheral_preserving(g.map, M.source())) {
      throw std::invalid_argument("compute_mcbiset: generator " + g.name +
                                  " is not peripheral-preserving");
    }
    mcb.gen_names.push_back(g.name);
    mcb.gen_maps.push_back(g.map);
  }
  mcb.acting = free_alphabet_group(mcb.gen_names);
  mcb.free_alphabet = true;
  mcb.base = M;
  mcb.basis.push_back(M);
  mcb.labels.push_back("B");
  mcb.table.resize(gens.size());
  std::map<Distillation, int> index{{distill(M), 0}};
  Automorphism id = Automorphism::identity(M.target());
  for (std::size_t k = 0; k < mcb.basis.size(); ++k) {
    for (std::size_t g = 0; g < gens.size(); ++g) {
      SphereMachine Mk = pre_compose(mcb.basis[k], gens[g].map);
      Distillation D = distill(Mk);
      auto it = index.find(D);
      Transition tr;
      if (it == index.end()) {
        if (mcb.basis.size() >= opt.max_basis) {
          throw std::runtime_error("compute_mcbiset: basis exceeds limit");
        }
        tr.next = static_cast<int>(mcb.basis.size());
        tr.knitting = id;
        tr.word = Word();
        tr.change = BasisChange::identity(M.degree());
        index.emplace(std::move(D), tr.next);
        mcb.labels.push_back(mcb.labels[k] + "*" + gens[g].name);
        mcb.basis.push_back(std::move(Mk));
      } else {
        tr.next = it->second;
        auto w = same_left_orbit(mcb.basis[tr.next], Mk);
        if (!w) {
          throw std::runtime_error(
              "compute_mcbiset: could not reconstruct the knitting for "
              "generator " + gens[g].name + " at basis element " +
              std::to_string(k));
        }
        if (opt.verify &&
            change_basis(post_compose(mcb.basis[tr.next], w->knitting),
                         w->change) != Mk) {
          throw std::logic_error("compute_mcbiset: table edge fails to verify");
        }
        tr.knitting = std::move(w->knitting);
        tr.change = std::move(w->change);
      }
      mcb.table[g].push_back(std::move(tr));
    }
  }
  return mcb;
}

MappingClassBiset mcbiset_from_recursion(SphereMachine const& R,
                                         std::vector<std::string> labels) {
  R.require_relator();
  if (!(R.source() == R.target())) {
    throw std::invalid_argument("recursion must be over a single group");
  }
  MappingClassBiset mcb;
  mcb.acting = R.source();
  mcb.gen_names = R.source().names();
  if (labels.empty()) {
    for (std::size_t k = 0; k < R.degree(); ++k) {
      labels.push_back(std::to_string(k + 1));
    }
  }
  if (labels.size() != R.degree()) {
    throw std::invalid_argument("recursion: expected " +
                                std::to_string(R.degree()) + " labels");
  }
  mcb.labels = std::move(labels);
  for (auto const& row : R.rows()) {
    std::vector<Transition> t;
    for (std::size_t k = 0; k < R.degree(); ++k) {
      Transition tr;
      tr.next = row.perm(static_cast<int>(k));
      tr.word = row.entries[k];
      t.push_back(std::move(tr));
    }
    mcb.table.push_back(std::move(t));
  }
  return mcb;
}

std::size_t express_knittings(MappingClassBiset& mcb,
                              std::optional<SphereGroup> const& acting,
                              std::size_t max_length) {
  if (mcb.gen_maps.empty() || !mcb.base) {
    throw std::logic_error("express_knittings: no automorphisms to search");
  }
  if (acting) {
    if (acting->names() != mcb.gen_names) {
      throw std::invalid_argument(
          "express_knittings: the acting group must list the generators in "
          "table order");
    }
    mcb.acting = *acting;
    mcb.free_alphabet = false;
  }
  SphereGroup const& H = mcb.base->target();
  if (!(mcb.base->source() == H)) {
    throw std::invalid_argument(
        "express_knittings: knittings act on the target group, which differs "
        "from the group the generators act on");
  }
  std::map<std::vector<Word>, std::vector<std::pair<int, int>>> needed;
  for (std::size_t g = 0; g < mcb.table.size(); ++g) {
    for (std::size_t k = 0; k < mcb.table[g].size(); ++k) {
      auto& tr = mcb.table[g][k];
      if (tr.word) {
        continue;
      }
      needed[outer_key(*tr.knitting, H)].emplace_back(int(g), int(k));
    }
  }
  if (H.size() == 4) {
    TorusCoverHomology homology(H);
    for (auto it = needed.begin(); it != needed.end();) {
      auto const& [g0, k0] = it->second.front();
      auto w = homology.express(*mcb.table[g0][k0].knitting, mcb.gen_maps);
      if (!w) {
        ++it;
        continue;
      }
      Word nf = mcb.acting.normal_form(*w);
      for (auto [g, k] : it->second) {
        mcb.table[g][k].word = nf;
      }
      it = needed.erase(it);
    }
  }
  int r = mcb.free_alphabet ? static_cast<int>(mcb.gen_names.size())
                            : mcb.acting.rank();
  std::vector<Automorphism> pos;
  std::vector<Automorphism> neg;
  for (int x = 1; x <= r; ++x) {
    pos.push_back(mcb.gen_maps[x - 1]);
    neg.push_back(inverse(mcb.gen_maps[x - 1], H));
  }
  auto resolve = [&](std::vector<Word> const& key, Word const& w) {
    auto it = needed.find(key);
    if (it == needed.end()) {
      return;
    }
    for (auto [g, k] : it->second) {
      mcb.table[g][k].word = w;
    }
    needed.erase(it);
  };
  std::vector<std::pair<Word, Automorphism>> level{
      {Word(), Automorphism::identity(H)}};
  resolve(outer_key(level.front().second, H), Word());
  for (std::size_t len = 1; len <= max_length && !needed.empty(); ++len) {
    std::vector<std::pair<Word, Automorphism>> next;
    for (auto const& [w, a] : level) {
      for (int x = 1; x <= r; ++x) {
        for (int sgn : {1, -1}) {
          Letter l = sgn * x;
          if (!w.empty() && w.back() == -l) {
            continue;
          }
          Automorphism b = compose(a, sgn > 0 ? pos[x - 1] : neg[x - 1]);
          Word wl = w * Word({l});
          resolve(outer_key(b, H), wl);
          next.emplace_back(std::move(wl), std::move(b));
        }
      }
    }
    level = std::move(next);
  }
  std::size_t left = 0;
  for (auto const& [key, v] : needed) {
    left += v.size();
  }
  return left;
}

RewriteResult rewrite(MappingClassBiset const& mcb, int k, Word const& m) {
  Word out;
  for (Letter x : m.letters()) {
    if (x > 0) {
      auto const& tr = mcb.table.at(x - 1).at(k);
      if (!tr.word) {
        throw std::logic_error("rewrite: knitting has no word");
      }
      out *= *tr.word;
      k = tr.next;
    } else {
      auto const& row = mcb.table.at(-x - 1);
      int k0 = -1;
      for (std::size_t j = 0; j < row.size(); ++j) {
        if (row[j].next == k) {
          k0 = static_cast<int>(j);
          break;
        }
      }
      if (k0 < 0 || !row[k0].word) {
        throw std::logic_error("rewrite: cannot invert the transition");
      }
      out *= row[k0].word->inverse();
      k = k0;
    }
  }
  return {mcb.acting.normal_form(out), k};
}

std::pair<Automorphism, int> rewrite_automorphism(MappingClassBiset const& mcb,
                                                  int k, Word const& m) {
  if (!mcb.base) {
    throw std::logic_error("rewrite_automorphism: no knitting automorphisms");
  }
  SphereGroup const& H = mcb.base->target();
  Automorphism out = Automorphism::identity(H);
  for (Letter x : m.letters()) {
    if (x > 0) {
      auto const& tr = mcb.table.at(x - 1).at(k);
      out = compose(out, *tr.knitting);
      k = tr.next;
    } else {
      auto const& row = mcb.table.at(-x - 1);
      auto it = std::find_if(row.begin(), row.end(),
                             [k](Transition const& t) { return t.next == k; });
      out = compose(out, inverse(*it->knitting, H));
      k = static_cast<int>(it - row.begin());
    }
  }
  return {out, k};
}

Terminal conjugacy_iterate(MappingClassBiset const& mcb, State start,
                           std::size_t max_steps) {
  Terminal t;
  std::map<State, std::size_t> seen;
  State cur{mcb.acting.normal_form(start.word), start.basis};
  while (t.steps <= max_steps) {
    if (cur.word.empty()) {
      t.terminal = {cur};
      t.converged = true;
      return t;
    }
    if (auto it = seen.find(cur); it != seen.end()) {
      t.terminal.assign(t.visited.begin() + it->second, t.visited.end());
      t.converged = true;
      return t;
    }
    seen.emplace(cur, t.visited.size());
    t.visited.push_back(cur);
    auto r = rewrite(mcb, cur.basis, cur.word);
    cur = {std::move(r.word), r.next};
    ++t.steps;
  }
  return t;
}

LiftMultiset lift_multiset_in_mcbiset(MappingClassBiset const& mcb, int g) {
  Permutation p = mcb.action(g);
  LiftMultiset out;
  for (auto const& c : p.cycles()) {
    Word w;
    for (int k : c) {
      auto const& tr = mcb.table[g - 1][k];
      if (!tr.word) {
        throw std::logic_error("lift_multiset_in_mcbiset: missing words");
      }
      w *= *tr.word;
    }
    out.push_back({c.size(), ConjClass::of(mcb.acting, w)});
  }
  return out;
}

PermGroupReport monodromy(SphereMachine const& M) {
  PermGroupReport r;
  r.generators = M.permutations();
  r.order = StabilizerChain(r.generators, M.degree()).order();
  r.transitive = is_transitive(r.generators, M.degree());
  return r;
}

QuotientAction quotient_action(Action const& a,
                               std::vector<Permutation> const& V) {
  std::size_t N = a.size();
  for (auto const& v : V) {
    if (v.degree() != N) {
      throw std::invalid_argument("quotient_action: degree mismatch");
    }
  }
  QuotientAction q;
  q.orbits = orbits(V, N);
  q.orbit_of.assign(N, -1);
  for (std::size_t o = 0; o < q.orbits.size(); ++o) {
    for (int x : q.orbits[o]) {
      q.orbit_of[x] = static_cast<int>(o);
    }
  }
  q.action.names = a.names;
  for (std::size_t g = 0; g < a.perms.size(); ++g) {
    std::vector<int> img(q.orbits.size());
    for (std::size_t o = 0; o < q.orbits.size(); ++o) {
      int target = q.orbit_of[a.perms[g](q.orbits[o].front())];
      for (int x : q.orbits[o]) {
        if (q.orbit_of[a.perms[g](x)] != target) {
          throw std::invalid_argument(
              "quotient_action: generator " + a.names[g] +
              " does not permute the orbits");
        }
      }
      img[o] = target;
    }
    q.action.perms.emplace_back(std::move(img));
  }
  return q;
}

CosetSpace regular_action(std::vector<std::string> const& names,
                          std::vector<Permutation> const& gens) {
  if (gens.empty()) {
    throw std::invalid_argument("regular_action: no generators");
  }
  CosetSpace space;
  space.elements = enumerate_group(gens, gens.front().degree());
  std::map<Permutation, int> idx;
  for (std::size_t i = 0; i < space.elements.size(); ++i) {
    idx[space.elements[i]] = static_cast<int>(i);
  }
  space.right.names = names;
  for (auto const& g : gens) {
    std::vector<int> img;
    for (auto const& e : space.elements) {
      img.push_back(idx.at(e * g));
    }
    space.right.perms.emplace_back(std::move(img));
  }
  return space;
}

std::vector<Permutation> left_multiplication(CosetSpace const& space,
                                             std::vector<Permutation> const& V) {
  std::map<Permutation, int> idx;
  for (std::size_t i = 0; i < space.elements.size(); ++i) {
    idx[space.elements[i]] = static_cast<int>(i);
  }
  std::vector<Permutation> out;
  for (auto const& v : V) {
    std::vector<int> img;
    for (auto const& e : space.elements) {
      auto it = idx.find(v * e);
      if (it == idx.end()) {
        throw std::invalid_argument("left_multiplication: not in the group");
      }
      img.push_back(it->second);
    }
    out.emplace_back(std::move(img));
  }
  return out;
}

std::optional<CosetSpace> label_basis(MappingClassBiset const& mcb,
                                      std::vector<Permutation> const& images) {
  if (images.size() != mcb.generator_count() || images.empty()) {
    throw std::invalid_argument("label_basis: one image per generator");
  }
  std::vector<std::optional<Permutation>> lab(mcb.size());
  lab[0] = Permutation(images.front().degree());
  std::vector<int> queue{0};
  for (std::size_t q = 0; q < queue.size(); ++q) {
    int k = queue[q];
    for (std::size_t g = 0; g < images.size(); ++g) {
      int n = mcb.table[g][k].next;
      Permutation e = *lab[k] * images[g];
      if (!lab[n]) {
        lab[n] = e;
        queue.push_back(n);
      } else if (*lab[n] != e) {
        return std::nullopt;
      }
    }
  }
  CosetSpace space;
  std::set<Permutation> distinct;
  for (auto const& l : lab) {
    if (!l || !distinct.insert(*l).second) {
      return std::nullopt;
    }
    space.elements.push_back(*l);
  }
  space.right.names = mcb.gen_names;
  for (std::size_t g = 1; g <= images.size(); ++g) {
    space.right.perms.push_back(mcb.action(static_cast<int>(g)));
  }
  return space;
}

CorrespondenceInvariants correspondence_invariants(
    std::vector<Permutation> const& perms) {
  if (perms.empty()) {
    throw std::invalid_argument("correspondence_invariants: no permutations");
  }
  Permutation prod(perms.front().degree());
  for (auto const& p : perms) {
    prod = prod * p;
  }
  if (!prod.is_identity()) {
    throw std::invalid_argument(
        "correspondence_invariants: product of the permutations is not the "
        "identity");
  }
  CorrespondenceInvariants c;
  c.points = static_cast<long>(prod.degree());
  for (auto const& p : perms) {
    c.punctures += static_cast<long>(p.cycles().size());
  }
  c.euler_characteristic = c.points * (2 - static_cast<long>(perms.size()));
  long twice = 2 - c.euler_characteristic - c.punctures;
  if (twice < 0 || twice % 2 != 0) {
    throw std::invalid_argument("correspondence_invariants: inconsistent data");
  }
  c.genus = twice / 2;
  return c;
}

}  // namespace sphmach
