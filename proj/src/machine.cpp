#include "sphmach/machine.hpp"

#include <algorithm>
#include <map>

namespace sphmach {

WreathElement WreathElement::identity(std::size_t degree) {
  return {std::vector<Word>(degree), Permutation(degree)};
}

bool WreathElement::is_identity() const {
  return perm.is_identity() &&
         std::all_of(entries.begin(), entries.end(),
                     [](Word const& w) { return w.empty(); });
}

WreathElement operator*(WreathElement const& a, WreathElement const& b) {
  WreathElement r;
  r.entries.resize(a.entries.size());
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    r.entries[i] = a.entries[i] * b.entries[a.perm(static_cast<int>(i))];
  }
  r.perm = a.perm * b.perm;
  return r;
}

WreathElement inverse(WreathElement const& a) {
  WreathElement r;
  r.perm = a.perm.inverse();
  r.entries.resize(a.entries.size());
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    r.entries[i] = a.entries[r.perm(static_cast<int>(i))].inverse();
  }
  return r;
}

SphereMachine::SphereMachine(SphereGroup source, SphereGroup target,
                             std::vector<MachineRow> rows)
    : source_(std::move(source)),
      target_(std::move(target)),
      rows_(std::move(rows)) {
  if (static_cast<int>(rows_.size()) != source_.size()) {
    throw MalformedMachine("machine: expected " +
                           std::to_string(source_.size()) + " rows, got " +
                           std::to_string(rows_.size()));
  }
  if (rows_.empty()) {
    degree_ = 1;
    relator_ok_ = true;
    return;
  }
  degree_ = rows_.front().entries.size();
  if (degree_ == 0) {
    throw MalformedMachine("machine: degree must be at least 1");
  }
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    auto& r = rows_[i];
    if (r.entries.size() != degree_ || r.perm.degree() != degree_) {
      throw MalformedMachine("machine: row " + source_.name(int(i) + 1) +
                             " does not have degree " +
                             std::to_string(degree_));
    }
    for (auto& w : r.entries) {
      try {
        w = target_.normal_form(w);
      } catch (std::out_of_range const& e) {
        throw MalformedMachine("machine: row " + source_.name(int(i) + 1) +
                               ": " + e.what());
      }
    }
    inverse_rows_.push_back(inverse(WreathElement{r.entries, r.perm}));
  }
  relator_ok_ = evaluate(source_.relator()).is_identity();
}

SphereMachine SphereMachine::identity(SphereGroup const& G) {
  std::vector<MachineRow> rows;
  for (int i = 1; i <= G.size(); ++i) {
    rows.push_back({{G.generator(i)}, Permutation(1)});
  }
  return SphereMachine(G, G, std::move(rows));
}

std::vector<Permutation> SphereMachine::permutations() const {
  std::vector<Permutation> p;
  for (auto const& r : rows_) {
    p.push_back(r.perm);
  }
  return p;
}

void SphereMachine::require_relator() const {
  if (!relator_ok_) {
    throw MalformedMachine(
        "machine: the relator does not evaluate to the identity");
  }
}

WreathElement SphereMachine::evaluate(Word const& w) const {
  WreathElement r = WreathElement::identity(degree_);
  for (Letter x : w.letters()) {
    std::size_t i = static_cast<std::size_t>(x < 0 ? -x : x);
    if (i > rows_.size()) {
      throw std::out_of_range("evaluate: generator index out of range");
    }
    if (x > 0) {
      r = r * WreathElement{rows_[i - 1].entries, rows_[i - 1].perm};
    } else {
      r = r * inverse_rows_[i - 1];
    }
  }
  return r;
}

LiftMultiset multiset_of_lifts(SphereMachine const& M, Word const& g) {
  WreathElement e = M.evaluate(g);
  LiftMultiset out;
  for (auto const& c : e.perm.cycles()) {
    Word h;
    for (int s : c) {
      h *= e.entries[s];
    }
    out.push_back({c.size(), ConjClass::of(M.target(), h)});
  }
  return out;
}

LiftMultiset multiset_of_lifts(SphereMachine const& M, ConjClass const& c) {
  auto m = multiset_of_lifts(M, c.representative());
  if (c.sign_insensitive()) {
    for (auto& l : m) {
      l.cls = l.cls.unsigned_class();
    }
  }
  return m;
}

LiftMultiset sorted(LiftMultiset m) {
  std::sort(m.begin(), m.end());
  return m;
}

ValidationReport validate_sphere(SphereMachine const& M) {
  ValidationReport rep;
  std::size_t d = M.degree();
  rep.relator = M.relator_holds();
  if (!rep.relator) {
    rep.problems.push_back("relator does not evaluate to the identity");
  }
  auto perms = M.permutations();
  rep.transitive = is_transitive(perms, d);
  if (!rep.transitive) {
    rep.problems.push_back("permutation group is not transitive");
  }
  for (auto const& p : perms) {
    for (auto const& c : p.cycles()) {
      rep.deficit += static_cast<long>(c.size()) - 1;
    }
  }
  rep.expected_deficit = 2 * static_cast<long>(d) - 2;
  rep.riemann_hurwitz = rep.deficit == rep.expected_deficit;
  if (!rep.riemann_hurwitz) {
    rep.problems.push_back("cycle deficit " + std::to_string(rep.deficit) +
                           " differs from 2d-2 = " +
                           std::to_string(rep.expected_deficit));
  }
  SphereGroup const& H = M.target();
  std::vector<int> hits(static_cast<std::size_t>(H.size()), 0);
  bool stray = false;
  for (int i = 1; i <= M.source().size(); ++i) {
    for (auto const& l : multiset_of_lifts(M, M.source().generator(i))) {
      if (l.cls.trivial()) {
        continue;
      }
      if (auto j = peripheral_index(H, l.cls)) {
        ++hits[*j - 1];
      } else {
        stray = true;
        rep.problems.push_back("lift of " + M.source().name(i) +
                               " is neither trivial nor peripheral: " +
                               H.format(l.cls.representative()));
      }
    }
  }
  rep.peripheral_lifts = !stray;
  for (int j = 1; j <= H.size(); ++j) {
    if (hits[j - 1] != 1) {
      rep.peripheral_lifts = false;
      rep.problems.push_back("peripheral class " + H.name(j) + " occurs " +
                             std::to_string(hits[j - 1]) + " times");
    }
  }
  return rep;
}

void require_sphere(SphereMachine const& M) {
  auto rep = validate_sphere(M);
  if (!rep.ok()) {
    throw MalformedMachine("not a sphere machine: " + rep.problems.front());
  }
}

std::vector<PortraitEntry> portrait(SphereMachine const& M) {
  require_sphere(M);
  SphereGroup const& H = M.target();
  std::vector<PortraitEntry> out(static_cast<std::size_t>(H.size()));
  for (int i = 1; i <= M.source().size(); ++i) {
    for (auto const& l : multiset_of_lifts(M, M.source().generator(i))) {
      if (auto j = peripheral_index(H, l.cls)) {
        out[*j - 1] = {i, l.degree};
      }
    }
  }
  return out;
}

SphereMachine tensor(SphereMachine const& M1, SphereMachine const& M2) {
  if (!(M1.target() == M2.source())) {
    throw std::invalid_argument("tensor: target of the first machine is not "
                                "the source of the second");
  }
  std::size_t d1 = M1.degree();
  std::size_t d2 = M2.degree();
  std::vector<MachineRow> rows;
  for (auto const& r : M1.rows()) {
    MachineRow out;
    out.entries.resize(d1 * d2);
    std::vector<int> img(d1 * d2);
    for (std::size_t x = 0; x < d1; ++x) {
      WreathElement e = M2.evaluate(r.entries[x]);
      std::size_t x2 = static_cast<std::size_t>(r.perm(int(x)));
      for (std::size_t y = 0; y < d2; ++y) {
        out.entries[x * d2 + y] = e.entries[y];
        img[x * d2 + y] = static_cast<int>(x2 * d2 + e.perm(int(y)));
      }
    }
    out.perm = Permutation(std::move(img));
    rows.push_back(std::move(out));
  }
  return SphereMachine(M1.source(), M2.target(), std::move(rows));
}

BasisChange BasisChange::identity(std::size_t degree) {
  return {std::vector<Word>(degree), Permutation(degree)};
}

SphereMachine change_basis(SphereMachine const& M, BasisChange const& b) {
  std::size_t d = M.degree();
  if (b.conjugators.size() != d || b.relabel.degree() != d) {
    throw std::invalid_argument("change_basis: length mismatch");
  }
  Permutation const& r = b.relabel;
  Permutation rinv = r.inverse();
  std::vector<Word> l;
  for (auto const& w : b.conjugators) {
    l.push_back(M.target().normal_form(w));
  }
  std::vector<MachineRow> rows;
  for (auto const& row : M.rows()) {
    MachineRow out;
    out.perm = rinv * row.perm * r;
    out.entries.resize(d);
    for (std::size_t s = 0; s < d; ++s) {
      int rs = r(int(s));
      int rsg = r(row.perm(int(s)));
      out.entries[rs] = l[rs].inverse() * row.entries[s] * l[rsg];
    }
    rows.push_back(std::move(out));
  }
  return SphereMachine(M.source(), M.target(), std::move(rows));
}

SphereMachine relabel(SphereMachine const& M, Permutation const& r) {
  return change_basis(M, {std::vector<Word>(M.degree()), r});
}

SphereMachine pre_compose(SphereMachine const& M, Automorphism const& phi) {
  if (!is_peripheral_preserving(phi, M.source())) {
    throw std::invalid_argument("pre_compose: automorphism is not "
                                "peripheral-preserving");
  }
  std::vector<MachineRow> rows;
  for (auto const& w : phi.images()) {
    WreathElement e = M.evaluate(w);
    rows.push_back({std::move(e.entries), std::move(e.perm)});
  }
  return SphereMachine(M.source(), M.target(), std::move(rows));
}

SphereMachine post_compose(SphereMachine const& M, Automorphism const& psi) {
  if (!is_peripheral_preserving(psi, M.target())) {
    throw std::invalid_argument("post_compose: automorphism is not "
                                "peripheral-preserving");
  }
  std::vector<MachineRow> rows;
  for (auto const& row : M.rows()) {
    MachineRow out{{}, row.perm};
    for (auto const& w : row.entries) {
      out.entries.push_back(psi.apply(w));
    }
    rows.push_back(std::move(out));
  }
  return SphereMachine(M.source(), M.target(), std::move(rows));
}

std::vector<Word> schreier_transversal(SphereMachine const& M, int start) {
  std::size_t d = M.degree();
  std::vector<std::optional<Word>> T(d);
  T[start] = Word();
  std::vector<int> queue{start};
  int rank = M.source().rank();
  for (std::size_t k = 0; k < queue.size(); ++k) {
    int p = queue[k];
    for (int j = 1; j <= rank; ++j) {
      int q = M.row(j).perm(p);
      if (!T[q]) {
        T[q] = *T[p] * Word::generator(j);
        queue.push_back(q);
      }
    }
  }
  if (queue.size() != d) {
    throw std::invalid_argument("machine is not transitive");
  }
  std::vector<Word> out;
  for (auto& t : T) {
    out.push_back(std::move(*t));
  }
  return out;
}

SubgroupPresentation stabilizer_subgroup(SphereMachine const& M,
                                         int basepoint) {
  if (basepoint < 1 || static_cast<std::size_t>(basepoint) > M.degree()) {
    throw std::out_of_range("stabilizer_subgroup: basepoint out of range");
  }
  SubgroupPresentation out;
  out.basepoint = basepoint;
  out.transversal = schreier_transversal(M, basepoint - 1);
  SphereGroup const& G = M.source();
  for (std::size_t p = 0; p < M.degree(); ++p) {
    for (int j = 1; j <= G.rank(); ++j) {
      int q = M.row(j).perm(int(p));
      Word w = out.transversal[p] * Word::generator(j) *
               out.transversal[q].inverse();
      if (!w.empty()) {
        out.generators.push_back(std::move(w));
      }
    }
  }
  for (int i = 1; i <= G.size(); ++i) {
    for (auto const& c : M.row(i).perm.cycles()) {
      Word const& T = out.transversal[c.front()];
      Word rep = G.normal_form(
          T * G.generator(i).pow(static_cast<long>(c.size())) * T.inverse());
      std::vector<int> cyc;
      for (int x : c) {
        cyc.push_back(x + 1);
      }
      out.peripheral.push_back({i, std::move(cyc), c.size(), std::move(rep)});
    }
  }
  return out;
}

std::pair<SphereMachine, BasisChange> normalize(SphereMachine const& M) {
  auto T = schreier_transversal(M, 0);
  BasisChange b = BasisChange::identity(M.degree());
  for (std::size_t p = 0; p < M.degree(); ++p) {
    b.conjugators[p] = M.evaluate(T[p]).entries[0].inverse();
  }
  return {change_basis(M, b), b};
}

}  // namespace sphmach
