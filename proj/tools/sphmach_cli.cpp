// Command line front end: one subcommand per computation, human-readable
// output by default and a stable JSON report with --json.
//
// Exit codes: 0 ok, 1 negative answer, 2 inconclusive, 3 input error.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sphmach/mcb_json.hpp"
#include "sphmach/mcbiset.hpp"
#include "sphmach/multicurve.hpp"
#include "sphmach/parse.hpp"

using nlohmann::json;
using namespace sphmach;

namespace {

enum Exit { kOk = 0, kNegative = 1, kInconclusive = 2, kInputError = 3 };

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Collects everything that determines a report, for its digest.
class Digest {
 public:
  void add(std::string_view bytes) {
    for (unsigned char c : bytes) {
      h_ ^= c;
      h_ *= 1099511628211ull;
    }
    h_ ^= 0xff;  // separator
    h_ *= 1099511628211ull;
  }
  std::string hex() const {
    std::ostringstream o;
    o << std::hex << std::setw(16) << std::setfill('0') << h_;
    return o.str();
  }

 private:
  std::uint64_t h_ = 14695981039346656037ull;
};

Digest digest;

std::string slurp(std::string const& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InputError("cannot read " + path);
  }
  std::ostringstream s;
  s << in.rdbuf();
  digest.add(s.str());
  return s.str();
}

MachineFile load_file(std::string const& path) { return parse_machine(slurp(path)); }

MappingClassBiset load_mcb(std::string const& path) {
  json doc;
  try {
    doc = json::parse(slurp(path));
  } catch (json::exception const& e) {
    throw InputError(path + ": " + e.what());
  }
  return mcb_from_json(doc);
}

std::vector<std::string> split_list(std::string const& s, char sep = ',') {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    auto b = cur.find_first_not_of(" \t");
    auto e = cur.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? "" : cur.substr(b, e - b + 1));
  }
  return out;
}

// "(1,2)(3,4)" on 1..degree
Permutation parse_cycles(std::string const& text, std::size_t degree) {
  std::vector<std::vector<int>> cycles;
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    if (text[i] != '(') {
      throw InputError("bad permutation '" + text + "'");
    }
    auto close = text.find(')', i);
    if (close == std::string::npos) {
      throw InputError("bad permutation '" + text + "'");
    }
    std::vector<int> c;
    for (auto const& x : split_list(text.substr(i + 1, close - i - 1))) {
      try {
        c.push_back(std::stoi(x));
      } catch (std::exception const&) {
        throw InputError("bad point '" + x + "' in permutation");
      }
    }
    cycles.push_back(c);
    i = close + 1;
  }
  return Permutation::from_cycles(degree, cycles);
}

std::vector<int> parse_ints(std::string const& s) {
  std::vector<int> out;
  for (auto const& x : split_list(s)) {
    try {
      out.push_back(std::stoi(x));
    } catch (std::exception const&) {
      throw InputError("expected an integer, got '" + x + "'");
    }
  }
  return out;
}

Rational parse_rational(std::string const& s) {
  Affine a = parse_affine(s);
  if (!a.coeffs.empty()) {
    throw InputError("expected a number, got '" + s + "'");
  }
  return a.constant;
}

// "[[1,2],[0,3]]"; entries numbers or strings like "1/2"
RationalMatrix parse_matrix(std::string const& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (json::exception const&) {
    throw InputError("bad matrix '" + text + "'");
  }
  std::vector<std::vector<Rational>> rows;
  if (!doc.is_array()) {
    throw InputError("matrix must be a list of rows");
  }
  for (auto const& r : doc) {
    if (!r.is_array()) {
      throw InputError("matrix must be a list of rows");
    }
    std::vector<Rational> row;
    for (auto const& x : r) {
      if (x.is_number_integer()) {
        row.push_back(Rational(x.get<long>()));
      } else if (x.is_string()) {
        row.push_back(parse_rational(x.get<std::string>()));
      } else {
        throw InputError("matrix entries must be integers or fractions");
      }
    }
    rows.push_back(row);
  }
  auto m = RationalMatrix::from_rows(rows);
  if (m.rows != m.cols) {
    throw InputError("matrix must be square");
  }
  return m;
}

// word over named automorphisms of the file, composed as functions
Automorphism automorphism_word(MachineFile const& f, std::string const& text,
                               SphereGroup const& G) {
  std::vector<std::string> names;
  for (auto const& a : f.automorphisms) {
    if (!a.on_target) {
      names.push_back(a.name);
    }
  }
  if (names.empty()) {
    throw InputError("the machine file declares no automorphisms");
  }
  SphereGroup alphabet = free_alphabet_group(names);
  Word w = parse_word(text, alphabet);
  std::vector<Automorphism> maps;
  for (auto const& n : names) {
    maps.push_back(f.automorphism(n));
  }
  Automorphism out = Automorphism::identity(G);
  for (Letter l : w.letters()) {
    if (static_cast<std::size_t>(std::abs(l)) > names.size()) {
      throw InputError("'" + text + "' uses the placeholder generator");
    }
    out = compose(out, l > 0 ? maps[l - 1] : inverse(maps[-l - 1], G));
  }
  return out;
}

Multicurve curves_of(MachineFile const& f, std::string const& text,
                     bool target) {
  SphereGroup const& G = target ? f.target() : f.source;
  std::vector<Word> reps;
  if (!text.empty()) {
    reps = parse_word_list(text, G, f.defines);
  } else {
    reps = target ? f.target_curves : f.curves;
  }
  if (reps.empty()) {
    throw InputError("no curves given (use --curves or a curves: line)");
  }
  return make_multicurve(G, reps);
}

std::string state_text(MappingClassBiset const& mcb, State const& s) {
  return "(" + mcb.format_word(s.word) + ", " + mcb.labels.at(s.basis) + ")";
}

json lifts_json(LiftMultiset const& L, SphereGroup const& H) {
  json out = json::array();
  for (auto const& l : sorted(L)) {
    out.push_back({{"degree", l.degree},
                   {"class", l.cls.trivial()
                                 ? std::string("1")
                                 : H.pretty(l.cls.representative())}});
  }
  return out;
}

json change_json(BasisChange const& b, SphereGroup const& H) {
  json c = json::array();
  for (auto const& w : b.conjugators) {
    c.push_back(H.pretty(w));
  }
  std::vector<int> r;
  for (int x : b.relabel.images()) {
    r.push_back(x + 1);
  }
  return {{"conjugators", c}, {"relabel", r}};
}

json automorphism_json(Automorphism const& a, SphereGroup const& G) {
  json out = json::object();
  for (int i = 1; i <= G.size(); ++i) {
    out[G.name(i)] = G.pretty(a.images()[i - 1]);
  }
  return out;
}

// Output of one command: a JSON result and optional raw text for humans.
struct Outcome {
  json result = json::object();
  std::string text;
  int code = kOk;
};

void print_human(json const& j, int indent = 0) {
  std::string pad(indent, ' ');
  for (auto const& [k, v] : j.items()) {
    if (v.is_string()) {
      std::cout << pad << k << ": " << v.get<std::string>() << "\n";
    } else if (v.is_object()) {
      std::cout << pad << k << ":\n";
      print_human(v, indent + 2);
    } else {
      std::cout << pad << k << ": " << v.dump() << "\n";
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sphere machines, mapping class bisets and multicurves"};
  app.require_subcommand(1);
  bool as_json = false;
  bool timing = false;
  app.add_flag("--json", as_json, "emit a JSON report");
  app.add_flag("--timing", timing, "include wall time in the report");

  std::function<Outcome()> run;
  std::string command;
  auto sub = [&](std::string const& name, std::string const& help) {
    auto* s = app.add_subcommand(name, help);
    s->callback([&command, name] { command = name; });
    return s;
  };

  // validate
  std::string file;
  std::string file2;
  auto* validate = sub("validate", "check the sphere biset conditions");
  validate->add_option("machine", file)->required();
  validate->final_callback([&] {
    run = [&] {
      auto f = load_file(file);
      auto M = f.machine(false);
      auto r = validate_sphere(M);
      Outcome o;
      o.result = {{"valid", r.ok()},
                  {"relator", r.relator},
                  {"transitive", r.transitive},
                  {"riemann_hurwitz", r.riemann_hurwitz},
                  {"peripheral_lifts", r.peripheral_lifts},
                  {"deficit", r.deficit},
                  {"expected_deficit", r.expected_deficit},
                  {"problems", r.problems}};
      o.code = r.ok() ? kOk : kNegative;
      return o;
    };
  });

  // lifts
  std::string word;
  auto* lifts = sub("lifts", "multiset of lifts of a source element");
  lifts->add_option("machine", file)->required();
  lifts->add_option("word", word)->required();
  lifts->final_callback([&] {
    run = [&] {
      auto f = load_file(file);
      auto M = f.machine();
      Word g = parse_word(word, M.source(), f.defines);
      Outcome o;
      o.result = {{"word", M.source().pretty(M.source().normal_form(g))},
                  {"lifts", lifts_json(multiset_of_lifts(M, g), M.target())}};
      return o;
    };
  });

  // portrait
  auto* portrait_cmd = sub("portrait", "punctures over punctures with degrees");
  portrait_cmd->add_option("machine", file)->required();
  portrait_cmd->final_callback([&] {
    run = [&] {
      auto M = load_file(file).machine();
      require_sphere(M);
      json rows = json::array();
      auto P = portrait(M);
      for (std::size_t j = 0; j < P.size(); ++j) {
        rows.push_back({{"puncture", M.target().name(static_cast<int>(j) + 1)},
                        {"over", M.source().name(P[j].source_puncture)},
                        {"degree", P[j].degree}});
      }
      Outcome o;
      o.result = {{"portrait", rows}};
      return o;
    };
  });

  // tensor
  auto* tensor_cmd = sub("tensor", "tensor product of two machines");
  tensor_cmd->add_option("first", file)->required();
  tensor_cmd->add_option("second", file2)->required();
  tensor_cmd->final_callback([&] {
    run = [&] {
      auto M1 = load_file(file).machine();
      auto M2 = load_file(file2).machine();
      auto M = tensor(M1, M2);
      Outcome o;
      o.text = format_machine(M);
      o.result = {{"degree", M.degree()}, {"machine", o.text}};
      return o;
    };
  });

  // rebase
  std::string conjugators;
  std::string relabel_text;
  bool normalize_flag = false;
  int basis_point = 1;
  auto* rebase = sub("rebase", "change of basis");
  rebase->add_option("machine", file)->required();
  rebase->add_option("--conjugators", conjugators,
                     "one target word per new basis position");
  rebase->add_option("--relabel", relabel_text,
                     "new position of each old position, 1-based");
  rebase->add_flag("--normalize", normalize_flag,
                   "trivialize entries along a spanning tree");
  rebase->add_option("--basis-point", basis_point,
                     "position moved to the front before normalizing");
  rebase->final_callback([&] {
    run = [&] {
      auto f = load_file(file);
      auto M = f.machine();
      std::size_t d = M.degree();
      Outcome o;
      if (normalize_flag) {
        if (basis_point < 1 || static_cast<std::size_t>(basis_point) > d) {
          throw InputError("--basis-point must be in 1.." + std::to_string(d));
        }
        Permutation swap = Permutation::from_cycles(
            d, basis_point == 1 ? std::vector<std::vector<int>>{}
                                : std::vector<std::vector<int>>{{1, basis_point}});
        auto [N, change] = normalize(relabel(M, swap));
        o.text = format_machine(N);
        o.result = {{"machine", o.text},
                    {"change", change_json(change, M.target())}};
        return o;
      }
      BasisChange b = BasisChange::identity(d);
      if (!conjugators.empty()) {
        b.conjugators = parse_word_list(conjugators, M.target(), f.defines);
        if (b.conjugators.size() != d) {
          throw InputError("expected " + std::to_string(d) + " conjugators");
        }
      }
      if (!relabel_text.empty()) {
        auto r = parse_ints(relabel_text);
        for (auto& x : r) {
          --x;
        }
        b.relabel = Permutation(r);
        if (b.relabel.degree() != d) {
          throw InputError("relabeling has the wrong degree");
        }
      }
      auto N = change_basis(M, b);
      o.text = format_machine(N);
      o.result = {{"machine", o.text}};
      return o;
    };
  });

  // mcbiset
  std::string twists;
  bool standard = false;
  bool sphere_relations = false;
  std::size_t max_length = 8;
  std::string out_path;
  auto* mcbiset = sub("mcbiset", "mapping class biset of a machine");
  mcbiset->add_option("machine", file)->required();
  mcbiset->add_option("--twists", twists,
                      "automorphisms of the file to act by, in order");
  mcbiset->add_flag("--standard", standard, "act by the interval Dehn twists");
  mcbiset->add_flag("--sphere-relations", sphere_relations,
                    "the twists satisfy the sphere relation in the given order");
  mcbiset->add_option("--max-length", max_length,
                      "longest knitting word searched by brute force");
  mcbiset->add_option("-o,--output", out_path, "write the biset JSON here");
  mcbiset->final_callback([&] {
    run = [&] {
      auto f = load_file(file);
      auto M = f.machine();
      MappingClassBiset mcb;
      std::size_t missing = 0;
      if (!f.labels.empty()) {
        mcb = mcbiset_from_recursion(M, f.labels);
      } else {
        std::vector<NamedMap> gens;
        if (standard) {
          for (auto const& t : standard_twists(M.source())) {
            gens.push_back({t.name, t.map});
          }
        } else {
          std::vector<std::string> names;
          if (twists.empty()) {
            for (auto const& a : f.automorphisms) {
              if (!a.on_target) {
                names.push_back(a.name);
              }
            }
          } else {
            names = split_list(twists);
          }
          for (auto const& n : names) {
            gens.push_back({n, f.automorphism(n)});
          }
        }
        if (gens.empty()) {
          throw InputError("no automorphisms to act by");
        }
        mcb = compute_mcbiset(M, gens);
        std::optional<SphereGroup> acting;
        if (sphere_relations) {
          acting = SphereGroup(mcb.gen_names);
        }
        missing = express_knittings(mcb, acting, max_length);
      }
      json doc = mcb_to_json(mcb);
      Outcome o;
      o.result = {{"basis", mcb.size()},
                  {"generators", mcb.gen_names},
                  {"unexpressed_knittings", missing}};
      if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) {
          throw InputError("cannot write " + out_path);
        }
        out << doc.dump(1) << "\n";
      } else {
        o.result["mcb"] = doc;
      }
      std::ostringstream t;
      t << "basis: " << mcb.size() << "\n";
      for (std::size_t g = 0; g < mcb.table.size(); ++g) {
        for (std::size_t k = 0; k < mcb.size(); ++k) {
          auto const& tr = mcb.table[g][k];
          t << mcb.labels[k] << " . " << mcb.gen_names[g] << " = "
            << (tr.word ? mcb.format_word(*tr.word) : std::string("?")) << " . "
            << mcb.labels[tr.next] << "\n";
        }
      }
      if (missing) {
        t << missing << " knitting(s) not expressed\n";
      }
      o.text = t.str();
      o.code = missing ? kInconclusive : kOk;
      return o;
    };
  });

  // iso
  std::string left1, right1, left2, right2, rebase_tuple;
  auto* iso = sub("iso", "are two machines in the same left orbit");
  iso->add_option("first", file)->required();
  iso->add_option("second", file2, "defaults to the first file");
  iso->add_option("--left", left1, "automorphism word acting on the left");
  iso->add_option("--right", right1, "automorphism word acting on the right");
  iso->add_option("--left2", left2, "same for the second machine");
  iso->add_option("--right2", right2, "same for the second machine");
  iso->add_option("--rebase", rebase_tuple,
                  "conjugators taking the first machine exactly to the second");
  iso->final_callback([&] {
    run = [&] {
      auto f1 = load_file(file);
      auto f2 = file2.empty() ? f1 : load_file(file2);
      auto twisted = [](MachineFile const& f, std::string const& l,
                        std::string const& r) {
        auto M = f.machine();
        if (!r.empty()) {
          M = pre_compose(M, automorphism_word(f, r, M.source()));
        }
        if (!l.empty()) {
          M = post_compose(M, automorphism_word(f, l, M.target()));
        }
        return M;
      };
      auto M1 = twisted(f1, left1, right1);
      auto M2 = twisted(f2, left2, right2);
      Outcome o;
      if (!rebase_tuple.empty()) {
        BasisChange b = BasisChange::identity(M1.degree());
        b.conjugators = parse_word_list(rebase_tuple, M1.target(), f1.defines);
        if (b.conjugators.size() != M1.degree()) {
          throw InputError("expected " + std::to_string(M1.degree()) +
                           " conjugators");
        }
        bool equal = change_basis(M1, b) == M2;
        o.result["rebased_equal"] = equal;
        o.code = equal ? kOk : kNegative;
      }
      auto w = same_left_orbit(M1, M2);
      o.result["same_left_orbit"] = w.has_value();
      if (w) {
        bool inner = outer_equal(w->knitting,
                                 Automorphism::identity(M1.target()),
                                 M1.target());
        o.result["knitting"] = automorphism_json(w->knitting, M1.target());
        o.result["knitting_is_inner"] = inner;
        o.result["change"] = change_json(w->change, M1.target());
      } else {
        o.code = kNegative;
      }
      return o;
    };
  });

  // classify-twist
  std::string start_label;
  std::size_t max_steps = 10000;
  auto* classify = sub("classify-twist", "iterate twist rewriting to a cycle");
  classify->add_option("mcb", file)->required();
  classify->add_option("word", word)->required();
  classify->add_option("--basis", start_label, "label of the starting element");
  classify->add_option("--max-steps", max_steps);
  classify->final_callback([&] {
    run = [&] {
      auto mcb = load_mcb(file);
      int k = 0;
      if (!start_label.empty()) {
        auto it = std::find(mcb.labels.begin(), mcb.labels.end(), start_label);
        if (it == mcb.labels.end()) {
          throw InputError("no basis element labeled " + start_label);
        }
        k = static_cast<int>(it - mcb.labels.begin());
      }
      Word m = parse_word(word, mcb.acting);
      auto T = conjugacy_iterate(mcb, State{mcb.acting.normal_form(m), k},
                                 max_steps);
      json visited = json::array();
      for (auto const& s : T.visited) {
        visited.push_back(state_text(mcb, s));
      }
      json terminal = json::array();
      for (auto const& s : T.terminal) {
        terminal.push_back(state_text(mcb, s));
      }
      Outcome o;
      o.result = {{"converged", T.converged},
                  {"steps", T.steps},
                  {"visited", visited},
                  {"terminal", terminal}};
      if (T.converged && T.terminal.size() == 1 && T.terminal[0].word.empty()) {
        o.result["class"] = mcb.labels[T.terminal[0].basis];
      }
      o.code = T.converged ? kOk : kInconclusive;
      return o;
    };
  });

  // monodromy
  auto* mono = sub("monodromy", "group generated by the permutations");
  mono->add_option("machine", file)->required();
  mono->final_callback([&] {
    run = [&] {
      auto M = load_file(file).machine();
      auto r = monodromy(M);
      json gens = json::object();
      for (int i = 1; i <= M.source().size(); ++i) {
        gens[M.source().name(i)] = r.generators[i - 1].to_string();
      }
      Outcome o;
      o.result = {{"order", r.order},
                  {"transitive", r.transitive},
                  {"permutations", gens}};
      o.code = r.transitive ? kOk : kNegative;
      return o;
    };
  });

  // thurston-matrix
  std::string curves;
  std::string target_curves;
  auto* thurston = sub("thurston-matrix", "Thurston matrix of a multicurve");
  thurston->add_option("machine", file)->required();
  thurston->add_option("--curves", curves, "comma-separated source words");
  thurston->add_option("--target-curves", target_curves,
                       "for machines between different groups");
  thurston->final_callback([&] {
    run = [&] {
      auto f = load_file(file);
      auto M = f.machine();
      auto C = curves_of(f, curves, false);
      bool dynamical = !f.target_group;
      auto D = dynamical && target_curves.empty()
                   ? C
                   : curves_of(f, target_curves, true);
      auto T = thurston_matrix(M, C, D);
      auto tags = classify_lifts(M, C, D);
      json lifts_out = json::object();
      for (std::size_t c = 0; c < C.size(); ++c) {
        json l = json::array();
        for (auto const& t : tags[c]) {
          static char const* kinds[] = {"curve", "peripheral", "trivial",
                                        "other"};
          json e = {{"degree", t.degree},
                    {"kind", kinds[static_cast<int>(t.kind)]},
                    {"class", t.cls.trivial()
                                  ? std::string("1")
                                  : M.target().pretty(t.cls.representative())}};
          if (t.kind == LiftKind::curve) {
            e["curve"] = D.names[t.index];
          }
          l.push_back(e);
        }
        lifts_out[C.names[c]] = l;
      }
      Outcome o;
      o.result = {{"rows", D.names},
                  {"columns", C.names},
                  {"matrix", matrix_json(T)},
                  {"lifts", lifts_out}};
      o.text = format_matrix(T) + "\n";
      return o;
    };
  });

  // obstructed
  std::string matrix_text;
  auto* obstructed = sub("obstructed", "annular obstruction test");
  obstructed->add_option("machine", file, "machine file (or use --matrix)");
  obstructed->add_option("--curves", curves);
  obstructed->add_option("--matrix", matrix_text, "e.g. [[1,2],[0,3]]");
  obstructed->final_callback([&] {
    run = [&] {
      RationalMatrix T;
      if (!matrix_text.empty()) {
        T = parse_matrix(matrix_text);
      } else if (!file.empty()) {
        auto f = load_file(file);
        auto C = curves_of(f, curves, false);
        T = thurston_matrix(f.machine(), C, C);
      } else {
        throw InputError("give a machine file or --matrix");
      }
      auto r = is_obstructed(T);
      json cp = json::array();
      for (auto const& c : r.charpoly) {
        cp.push_back(to_string(c));
      }
      Outcome o;
      o.result = {{"matrix", matrix_json(T)},
                  {"obstructed", r.obstructed},
                  {"charpoly", cp},
                  {"spectral_radius_bracket", {r.perron_low, r.perron_high}}};
      o.code = r.obstructed ? kOk : kNegative;
      return o;
    };
  });

  // solve-twists
  std::string theta_text;
  std::string names_text;
  auto* solve = sub("solve-twists", "solve v = theta + T v");
  solve->add_option("machine", file, "machine file (or use --matrix)");
  solve->add_option("--curves", curves);
  solve->add_option("--matrix", matrix_text);
  solve->add_option("--theta", theta_text, "one affine expression per curve")
      ->required();
  solve->add_option("--names", names_text, "curve names");
  solve->final_callback([&] {
    run = [&] {
      TwistFixedPointProblem p;
      if (!matrix_text.empty()) {
        p.T = parse_matrix(matrix_text);
      } else if (!file.empty()) {
        auto f = load_file(file);
        auto C = curves_of(f, curves, false);
        p.T = thurston_matrix(f.machine(), C, C);
        p.curve_names = C.names;
      } else {
        throw InputError("give a machine file or --matrix");
      }
      if (!names_text.empty()) {
        p.curve_names = split_list(names_text);
      }
      for (auto const& t : split_list(theta_text)) {
        p.theta.push_back(parse_affine(t));
      }
      if (p.theta.size() != p.T.rows ||
          (!p.curve_names.empty() && p.curve_names.size() != p.T.rows)) {
        throw InputError("need one theta entry and name per curve");
      }
      auto s = solve_twist_fixed_point(p);
      json cons = json::array();
      for (auto const& c : s.constraints) {
        cons.push_back(c.str() + " = 0");
      }
      json v = json::object();
      for (std::size_t i = 0; i < s.v.size(); ++i) {
        std::string n = p.curve_names.empty() ? std::to_string(i + 1)
                                              : p.curve_names[i];
        v["v_" + n] = s.v[i] ? s.v[i]->str() : std::string("free");
      }
      Outcome o;
      o.result = {{"consistent", s.consistent},
                  {"constraints", cons},
                  {"v", v},
                  {"free_rank", s.free_rank}};
      o.code = s.consistent ? kOk : kNegative;
      return o;
    };
  });

  // split
  std::size_t bound = 4;
  bool dot = false;
  auto* split = sub("split", "tree of sphere groups along a multicurve");
  split->add_option("machine", file, "file with generators and curves")
      ->required();
  split->add_option("--curves", curves);
  split->add_option("--bound", bound, "total conjugator length searched");
  split->add_flag("--dot", dot, "print the tree in DOT");
  split->final_callback([&] {
    run = [&] {
      auto f = load_file(file);
      auto C = curves_of(f, curves, false);
      auto r = mc_to_gog(C, bound);
      Outcome o;
      if (!r.tree) {
        o.result = {{"split", false},
                    {"failure", r.failure},
                    {"curve", C.names[r.failed_curve]}};
        o.code = r.failure == "bound-exhausted" ? kInconclusive : kNegative;
        return o;
      }
      auto problems = r.tree->check(C);
      o.result = {{"split", true},
                  {"tree", tree_json(*r.tree)},
                  {"check", problems}};
      if (dot) {
        o.text = tree_dot(*r.tree);
      }
      o.code = problems.empty() ? kOk : kNegative;
      return o;
    };
  });

  // promote
  std::string puncture_map;
  std::string curve_map;
  auto* promote = sub("promote", "promote a bijection of distinguished classes");
  promote->add_option("first", file)->required();
  promote->add_option("second", file2)->required();
  promote->add_option("--punctures", puncture_map,
                      "image of each puncture, 1-based (default identity)");
  promote->add_option("--curve-map", curve_map,
                      "image of each curve, 1-based (default identity)");
  promote->add_option("--bound", bound);
  promote->final_callback([&] {
    run = [&] {
      auto f1 = load_file(file);
      auto f2 = load_file(file2);
      auto C1 = curves_of(f1, "", false);
      auto C2 = curves_of(f2, "", false);
      auto r1 = mc_to_gog(C1, bound);
      auto r2 = mc_to_gog(C2, bound);
      if (!r1.tree || !r2.tree) {
        Outcome o;
        o.result = {{"promoted", false},
                    {"failure", "could not split: " +
                                    (r1.tree ? r2.failure : r1.failure)}};
        o.code = kInconclusive;
        return o;
      }
      ClassBijection h;
      if (puncture_map.empty()) {
        for (int i = 1; i <= f1.source.size(); ++i) {
          h.puncture.push_back(i);
        }
      } else {
        h.puncture = parse_ints(puncture_map);
      }
      if (curve_map.empty()) {
        for (std::size_t e = 0; e < C1.size(); ++e) {
          h.curve.push_back(static_cast<int>(e));
        }
      } else {
        for (int x : parse_ints(curve_map)) {
          h.curve.push_back(x - 1);
        }
      }
      auto p = promote_bijection(*r1.tree, *r2.tree, h);
      Outcome o;
      o.result["promoted"] = p.ok;
      if (!p.ok) {
        o.result["failed_step"] = p.failed_step;
        o.result["reason"] = p.reason;
        o.code = kNegative;
        return o;
      }
      SphereGroup const& H = r2.tree->group;
      json vs = json::array();
      for (auto const& v : p.vertices) {
        json imgs = json::array();
        for (auto const& w : v.images) {
          imgs.push_back(H.pretty(w));
        }
        vs.push_back({{"target", v.target}, {"images", imgs}});
      }
      json es = json::array();
      for (auto const& w : p.edge_conjugators) {
        es.push_back(H.pretty(w));
      }
      o.result["vertices"] = vs;
      o.result["edge_conjugators"] = es;
      return o;
    };
  });

  // invariants
  std::string label_by;
  std::string quotient;
  auto* invariants = sub("invariants",
                         "genus and punctures of the cover given by an action");
  invariants->add_option("input", file, ".mach or .mcb file")->required();
  invariants->add_option("--label-by", label_by,
                         "source generators whose permutations label the "
                         "basis, one per acting generator");
  invariants->add_option("--quotient", quotient,
                         "generators of a permutation group acting on the "
                         "labels from the left, separated by ';'");
  invariants->final_callback([&] {
    run = [&] {
      std::vector<Permutation> perms;
      std::vector<std::string> names;
      Outcome o;
      bool is_mcb = file.size() > 4 && file.substr(file.size() - 4) == ".mcb";
      if (!is_mcb) {
        auto M = load_file(file).machine();
        perms = M.permutations();
        names = M.source().names();
      } else {
        auto mcb = load_mcb(file);
        names = mcb.gen_names;
        for (int g = 1; g <= static_cast<int>(mcb.generator_count()); ++g) {
          perms.push_back(mcb.action(g));
        }
        if (!quotient.empty()) {
          if (label_by.empty() || !mcb.base) {
            throw InputError("--quotient needs --label-by and a base machine");
          }
          auto const& S = mcb.base->source();
          auto P = mcb.base->permutations();
          std::vector<Permutation> images;
          for (auto const& n : split_list(label_by)) {
            auto i = S.index_of(n);
            if (!i) {
              throw InputError("no generator " + n);
            }
            images.push_back(P[*i - 1]);
          }
          auto space = label_basis(mcb, images);
          if (!space) {
            o.result = {{"labeling", false}};
            o.code = kNegative;
            return o;
          }
          std::vector<Permutation> vg;
          for (auto const& c : split_list(quotient, ';')) {
            vg.push_back(parse_cycles(c, mcb.base->degree()));
          }
          auto V = enumerate_group(vg, mcb.base->degree());
          auto q = quotient_action(space->right,
                                   left_multiplication(*space, V));
          perms = q.action.perms;
          json cyc = json::object();
          for (std::size_t g = 0; g < perms.size(); ++g) {
            std::map<std::size_t, int> shape;
            for (auto const& c : perms[g].cycles()) {
              ++shape[c.size()];
            }
            json s = json::object();
            for (auto [len, cnt] : shape) {
              s[std::to_string(len)] = cnt;
            }
            cyc[names[g]] = s;
          }
          o.result["quotient_degree"] = q.orbits.size();
          o.result["cycle_types"] = cyc;
        }
      }
      auto inv = correspondence_invariants(perms);
      o.result["points"] = inv.points;
      o.result["punctures"] = inv.punctures;
      o.result["euler_characteristic"] = inv.euler_characteristic;
      o.result["genus"] = inv.genus;
      return o;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (CLI::CallForHelp const& e) {
    return app.exit(e);
  } catch (CLI::CallForAllHelp const& e) {
    return app.exit(e);
  } catch (CLI::ParseError const& e) {
    app.exit(e);
    return kInputError;
  }
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a != "--json" && a != "--timing") {
      digest.add(a);
    }
  }

  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = run();
  } catch (InputError const& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (ParseError const& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (std::invalid_argument const& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (std::out_of_range const& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (std::exception const& e) {
    std::cerr << "inconclusive: " << e.what() << "\n";
    return kInconclusive;
  }
  double ms = std::chrono::duration<double, std::milli>(
                  std::chrono::steady_clock::now() - t0)
                  .count();

  if (as_json) {
    json report = {{"command", command},
                   {"inputs_digest", digest.hex()},
                   {"result", o.result},
                   {"exit", o.code}};
    if (timing) {
      report["timing_ms"] = ms;
    }
    std::cout << report.dump(2) << "\n";
  } else if (!o.text.empty()) {
    std::cout << o.text;
    if (timing) {
      std::cout << "time: " << ms << " ms\n";
    }
  } else {
    print_human(o.result);
    if (timing) {
      std::cout << "time: " << ms << " ms\n";
    }
  }
  return o.code;
}
