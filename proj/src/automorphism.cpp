#include "sphmach/automorphism.hpp"

#include <stdexcept>

#include "sphmach/folding.hpp"

namespace sphmach {

Automorphism::Automorphism(SphereGroup const& G, std::vector<Word> images) {
  if (static_cast<int>(images.size()) != G.size()) {
    throw std::invalid_argument("Automorphism: expected " +
                                std::to_string(G.size()) + " images");
  }
  Word prod;
  for (auto& w : images) {
    w = G.normal_form(w);
    prod *= w;
  }
  if (!prod.empty()) {
    throw std::invalid_argument(
        "Automorphism: images do not satisfy the relator");
  }
  images_ = std::move(images);
}

Automorphism Automorphism::identity(SphereGroup const& G) {
  std::vector<Word> im;
  for (int i = 1; i <= G.size(); ++i) {
    im.push_back(G.generator(i));
  }
  return Automorphism(G, std::move(im));
}

Automorphism Automorphism::inner(SphereGroup const& G, Word const& w) {
  std::vector<Word> im;
  for (int i = 1; i <= G.size(); ++i) {
    im.push_back(G.generator(i).conjugate_by(w));
  }
  return Automorphism(G, std::move(im));
}

Automorphism compose(Automorphism const& f, Automorphism const& g) {
  std::vector<Word> im;
  for (auto const& w : g.images()) {
    im.push_back(f.apply(w));
  }
  // normal forms map to normal forms and the relator is preserved
  return Automorphism::trusted(std::move(im));
}

Automorphism inverse(Automorphism const& f, SphereGroup const& G) {
  int n = G.size();
  if (n == 0) {
    return f;
  }
  std::vector<Word> basis(f.images().begin(), f.images().end() - 1);
  SubgroupGraph graph(basis, n - 1);
  std::vector<Word> im;
  Word prod;
  for (int k = 1; k < n; ++k) {
    auto e = graph.express(G.generator(k));
    if (!e) {
      throw std::domain_error("inverse: images do not generate the group");
    }
    im.push_back(*e);
    prod *= *e;
  }
  im.push_back(prod.inverse());
  Automorphism g(G, std::move(im));
  if (compose(f, g) != Automorphism::identity(G)) {
    throw std::domain_error("inverse: not an automorphism");
  }
  return g;
}

Automorphism dehn_twist(int i, int j, SphereGroup const& G) {
  if (i < 1 || j > G.size() || i > j) {
    throw std::out_of_range("dehn_twist: need 1 <= i <= j <= n");
  }
  Word w;
  for (int k = i; k <= j; ++k) {
    w *= G.generator(k);
  }
  std::vector<Word> im;
  for (int k = 1; k <= G.size(); ++k) {
    Word g = G.generator(k);
    im.push_back(k >= i && k <= j ? g.conjugate_by(w) : g);
  }
  return Automorphism(G, std::move(im));
}

bool is_peripheral_preserving(Automorphism const& f, SphereGroup const& G) {
  for (int i = 1; i <= G.size(); ++i) {
    if (!is_conjugate(G.generator(i), f.images()[i - 1], G)) {
      return false;
    }
  }
  return true;
}

bool outer_equal(Automorphism const& f, Automorphism const& g,
                 SphereGroup const& G) {
  return simultaneous_conjugator(f.images(), g.images(), G).has_value();
}

std::vector<Word> outer_key(Automorphism const& f, SphereGroup const& G) {
  int n = G.size();
  if (n < 3) {
    return f.images();
  }
  Word g1 = G.normal_form(G.generator(1));
  auto c = is_conjugate(g1, f.images()[0], G);
  if (!c) {
    throw std::domain_error("outer_key: image of the first generator is not "
                            "conjugate to it");
  }
  Word w0inv = c->representative.inverse();
  std::vector<Word> im;
  for (auto const& x : f.images()) {
    im.push_back(x.conjugate_by(w0inv));
  }
  Word const& y = im[1];
  long bound = static_cast<long>(y.size()) + 1;
  long best_k = 0;
  Word best = y;
  for (long k = -bound; k <= bound; ++k) {
    Word z = y.conjugate_by(g1.pow(k));
    if (z < best) {
      best = std::move(z);
      best_k = k;
    }
  }
  Word p = g1.pow(best_k);
  for (auto& x : im) {
    x = x.conjugate_by(p);
  }
  return im;
}

std::vector<NamedAutomorphism> standard_twists(SphereGroup const& G) {
  std::vector<NamedAutomorphism> out;
  int n = G.size();
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      if (i == 1 && j == n) {
        continue;
      }
      out.push_back({"tau" + std::to_string(i) + "_" + std::to_string(j),
                     dehn_twist(i, j, G)});
    }
  }
  return out;
}

}  // namespace sphmach
