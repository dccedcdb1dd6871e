#include "sphmach/parse.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace sphmach {

ParseError::ParseError(std::string const& msg, std::size_t line,
                       std::size_t column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) +
                         ": " + msg),
      line_(line),
      column_(column) {}

namespace {

bool name_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::string trim(std::string_view s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) {
    ++a;
  }
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) {
    --b;
  }
  return std::string(s.substr(a, b - a));
}

// Recursive descent over one piece of text at a known line/column.
class WordParser {
 public:
  WordParser(std::string_view s, SphereGroup const& G,
             std::map<std::string, std::string> const& defines,
             std::size_t line, std::size_t col, int depth = 0)
      : s_(s), G_(G), defs_(defines), line_(line), col_(col), depth_(depth) {}

  Word parse_all() {
    skip();
    Word w = word();
    skip();
    if (pos_ != s_.size()) {
      fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    }
    return w;
  }

  Word word() {
    Word w = factor();
    skip();
    while (pos_ < s_.size() && (s_[pos_] == '*' || s_[pos_] == '/')) {
      bool divide = s_[pos_] == '/';
      ++pos_;
      Word x = factor();
      w *= divide ? x.inverse() : x;
      skip();
    }
    return w;
  }

 private:
  [[noreturn]] void fail(std::string const& msg) const {
    throw ParseError(msg, line_, col_ + pos_);
  }
  void skip() {
    while (pos_ < s_.size() &&
           std::isspace(static_cast<unsigned char>(s_[pos_]))) {
      ++pos_;
    }
  }

  Word factor() {
    Word x = primary();
    skip();
    while (pos_ < s_.size() && s_[pos_] == '^') {
      ++pos_;
      skip();
      if (pos_ < s_.size() &&
          (s_[pos_] == '-' || std::isdigit(static_cast<unsigned char>(s_[pos_])))) {
        bool neg = s_[pos_] == '-';
        if (neg) {
          ++pos_;
        }
        std::size_t start = pos_;
        while (pos_ < s_.size() &&
               std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
          ++pos_;
        }
        if (start == pos_) {
          fail("expected an exponent");
        }
        long k = std::stol(std::string(s_.substr(start, pos_ - start)));
        x = x.pow(neg ? -k : k);
      } else {
        x = x.conjugate_by(primary());
      }
      skip();
    }
    return x;
  }

  Word primary() {
    skip();
    if (pos_ >= s_.size()) {
      fail("expected a generator");
    }
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Word w = word();
      skip();
      if (pos_ >= s_.size() || s_[pos_] != ')') {
        fail("expected ')'");
      }
      ++pos_;
      return w;
    }
    if (c == '1' && (pos_ + 1 >= s_.size() || !name_char(s_[pos_ + 1]))) {
      ++pos_;
      return Word();
    }
    if (!name_start(c)) {
      fail("expected a generator name");
    }
    std::size_t start = pos_;
    while (pos_ < s_.size() && name_char(s_[pos_])) {
      ++pos_;
    }
    std::string name(s_.substr(start, pos_ - start));
    if (auto i = G_.index_of(name)) {
      return Word::generator(*i);
    }
    if (auto it = defs_.find(name); it != defs_.end()) {
      if (depth_ > 32) {
        fail("definitions nest too deeply at '" + name + "'");
      }
      return WordParser(it->second, G_, defs_, line_, col_ + start, depth_ + 1)
          .parse_all();
    }
    pos_ = start;
    fail("unknown generator '" + name + "'");
  }

  std::string_view s_;
  SphereGroup const& G_;
  std::map<std::string, std::string> const& defs_;
  std::size_t line_;
  std::size_t col_;
  int depth_;
  std::size_t pos_ = 0;
};

// split at top-level commas; returns (piece, offset)
std::vector<std::pair<std::string_view, std::size_t>> split_top(
    std::string_view s) {
  std::vector<std::pair<std::string_view, std::size_t>> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || (s[i] == ',' && depth == 0)) {
      out.emplace_back(s.substr(start, i - start), start);
      start = i + 1;
    } else if (s[i] == '(') {
      ++depth;
    } else if (s[i] == ')') {
      --depth;
    }
  }
  return out;
}

struct Line {
  std::size_t number;
  std::string text;  // comment stripped, right-trimmed
  std::size_t indent;
};

std::vector<std::string> parse_names(std::string_view s, Line const& L,
                                     std::size_t col) {
  std::vector<std::string> out;
  for (auto [piece, off] : split_top(s)) {
    std::string n = trim(piece);
    if (n.empty() || !name_start(n[0]) ||
        !std::all_of(n.begin(), n.end(), name_char)) {
      throw ParseError("bad generator name '" + n + "'", L.number,
                       col + off + 1);
    }
    out.push_back(n);
  }
  return out;
}

// relator line: product of every generator exactly once
std::vector<std::string> parse_relator(std::string_view s, Line const& L,
                                       std::size_t col,
                                       std::vector<std::string> const& gens) {
  std::vector<std::string> order;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == '*') {
      std::string n = trim(s.substr(start, i - start));
      if (std::find(gens.begin(), gens.end(), n) == gens.end()) {
        throw ParseError("relator uses unknown generator '" + n + "'",
                         L.number, col + start + 1);
      }
      order.push_back(n);
      start = i + 1;
    }
  }
  std::set<std::string> a(order.begin(), order.end());
  if (a.size() != order.size() || order.size() != gens.size()) {
    throw ParseError("relator must use every generator exactly once",
                     L.number, col + 1);
  }
  return order;
}

std::string join(std::vector<std::string> const& v, std::string const& sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    s += (i ? sep : "") + v[i];
  }
  return s;
}

}  // namespace

Word parse_word(std::string_view text, SphereGroup const& G,
                std::map<std::string, std::string> const& defines) {
  return WordParser(text, G, defines, 1, 1).parse_all();
}

std::vector<Word> parse_word_list(
    std::string_view text, SphereGroup const& G,
    std::map<std::string, std::string> const& defines) {
  std::vector<Word> out;
  if (trim(text).empty()) {
    return out;
  }
  for (auto [piece, off] : split_top(text)) {
    out.push_back(WordParser(piece, G, defines, 1, off + 1).parse_all());
  }
  return out;
}

MachineFile parse_machine(std::string_view text) {
  std::vector<Line> lines;
  {
    std::size_t n = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string_view::npos) {
        end = text.size();
      }
      ++n;
      std::string_view raw = text.substr(start, end - start);
      if (auto h = raw.find('#'); h != std::string_view::npos) {
        raw = raw.substr(0, h);
      }
      std::size_t indent = 0;
      while (indent < raw.size() &&
             std::isspace(static_cast<unsigned char>(raw[indent]))) {
        ++indent;
      }
      std::string t = trim(raw);
      if (!t.empty()) {
        lines.push_back({n, t, indent});
      }
      start = end + 1;
    }
  }

  auto key_of = [](std::string const& t) -> std::pair<std::string, std::size_t> {
    auto c = t.find(':');
    auto e = t.find('=');
    if (c == std::string::npos || (e != std::string::npos && e < c)) {
      return {"", 0};
    }
    return {trim(std::string_view(t).substr(0, c)), c + 1};
  };

  MachineFile f;
  std::vector<std::string> src_order;
  std::vector<std::string> tgt_order;
  std::map<std::string, std::string> defines;
  bool have_gens = false;

  // group declarations first
  for (auto const& L : lines) {
    auto [key, off] = key_of(L.text);
    std::string_view rest = std::string_view(L.text).substr(off);
    std::size_t col = L.indent + off;
    if (key == "generators") {
      f.declared = parse_names(rest, L, col);
      have_gens = true;
    } else if (key == "target-generators") {
      f.target_declared = parse_names(rest, L, col);
    }
  }
  if (!have_gens) {
    throw ParseError("missing 'generators:' line", 1, 1);
  }
  src_order = f.declared;
  tgt_order = f.target_declared;
  for (auto const& L : lines) {
    auto [key, off] = key_of(L.text);
    std::string_view rest = std::string_view(L.text).substr(off);
    std::size_t col = L.indent + off;
    if (key == "relator") {
      src_order = parse_relator(rest, L, col, f.declared);
    } else if (key == "target-relator") {
      if (f.target_declared.empty()) {
        throw ParseError("target-relator without target-generators", L.number,
                         1);
      }
      tgt_order = parse_relator(rest, L, col, f.target_declared);
    }
  }
  try {
    f.source = SphereGroup(src_order);
    if (!f.target_declared.empty()) {
      f.target_group = SphereGroup(tgt_order);
    }
  } catch (std::invalid_argument const& e) {
    throw ParseError(e.what(), lines.front().number, 1);
  }
  SphereGroup const& H = f.target();

  std::optional<std::size_t> degree;
  std::vector<std::optional<MachineRow>> rows(f.source.size());
  auto words_in = [&](std::string_view s, SphereGroup const& G, Line const& L,
                      std::size_t col) {
    std::vector<Word> out;
    if (trim(s).empty()) {
      return out;
    }
    for (auto [piece, o] : split_top(s)) {
      out.push_back(
          WordParser(piece, G, defines, L.number, col + o + 1).parse_all());
    }
    return out;
  };
  auto declared_to_relator = [&](std::vector<Word> im, SphereGroup const& G,
                                 std::vector<std::string> const& decl,
                                 Line const& L) {
    if (im.size() != decl.size()) {
      throw ParseError("expected " + std::to_string(decl.size()) +
                           " images, got " + std::to_string(im.size()),
                       L.number, 1);
    }
    std::vector<Word> out(im.size());
    for (std::size_t k = 0; k < decl.size(); ++k) {
      out[*G.index_of(decl[k]) - 1] = std::move(im[k]);
    }
    return out;
  };

  for (auto const& L : lines) {
    std::string const& t = L.text;
    auto [key, off] = key_of(t);
    std::string_view rest = std::string_view(t).substr(off);
    std::size_t col = L.indent + off;
    if (key == "generators" || key == "target-generators" ||
        key == "relator" || key == "target-relator") {
      continue;
    }
    if (key == "degree") {
      std::string v = trim(rest);
      if (v.empty() || !std::all_of(v.begin(), v.end(), [](char c) {
            return std::isdigit(static_cast<unsigned char>(c));
          }) || std::stoul(v) == 0) {
        throw ParseError("degree must be a positive integer", L.number,
                         col + 1);
      }
      degree = std::stoul(v);
    } else if (key == "curves") {
      f.curves = words_in(rest, f.source, L, col);
    } else if (key == "target-curves") {
      f.target_curves = words_in(rest, H, L, col);
    } else if (key == "labels") {
      for (auto [piece, o] : split_top(rest)) {
        f.labels.push_back(trim(piece));
      }
    } else if (key.rfind("automorphism ", 0) == 0 ||
               key.rfind("target-automorphism ", 0) == 0) {
      bool tgt = key[0] == 't';
      AutomorphismSpec a;
      a.name = trim(key.substr(key.find(' ')));
      a.on_target = tgt;
      SphereGroup const& G = tgt ? H : f.source;
      auto const& decl = tgt && !f.target_declared.empty() ? f.target_declared
                                                           : f.declared;
      a.images = declared_to_relator(words_in(rest, G, L, col), G, decl, L);
      f.automorphisms.push_back(std::move(a));
    } else if (!key.empty()) {
      throw ParseError("unknown directive '" + key + "'", L.number,
                       L.indent + 1);
    } else if (t.rfind("define ", 0) == 0) {
      auto eq = t.find('=');
      if (eq == std::string::npos) {
        throw ParseError("expected '=' in define", L.number, L.indent + 1);
      }
      std::string name = trim(std::string_view(t).substr(7, eq - 7));
      if (name.empty() || !name_start(name[0]) ||
          !std::all_of(name.begin(), name.end(), name_char)) {
        throw ParseError("bad name in define", L.number, L.indent + 8);
      }
      if (f.source.index_of(name) || H.index_of(name)) {
        throw ParseError("define shadows generator '" + name + "'", L.number,
                         L.indent + 8);
      }
      defines[name] = t.substr(eq + 1);
    } else {
      // row: name = <entries> cycles
      auto eq = t.find('=');
      auto lt = t.find('<');
      auto gt = t.rfind('>');
      if (eq == std::string::npos || lt == std::string::npos ||
          gt == std::string::npos || lt < eq || gt < lt) {
        throw ParseError("expected a row 'name=<...>(cycles)'", L.number,
                         L.indent + 1);
      }
      std::string name = trim(std::string_view(t).substr(0, eq));
      auto gi = f.source.index_of(name);
      if (!gi) {
        throw ParseError("unknown generator '" + name + "'", L.number,
                         L.indent + 1);
      }
      if (rows[*gi - 1]) {
        throw ParseError("second row for '" + name + "'", L.number,
                         L.indent + 1);
      }
      std::string_view inner = std::string_view(t).substr(lt + 1, gt - lt - 1);
      MachineRow row;
      for (auto [piece, o] : split_top(inner)) {
        if (trim(piece).empty()) {
          row.entries.emplace_back();
        } else {
          row.entries.push_back(WordParser(piece, H, defines, L.number,
                                           L.indent + lt + 2 + o)
                                    .parse_all());
        }
      }
      if (!degree) {
        degree = row.entries.size();
      }
      if (row.entries.size() != *degree) {
        throw ParseError("row '" + name + "' has " +
                             std::to_string(row.entries.size()) +
                             " entries, expected degree " +
                             std::to_string(*degree),
                         L.number, L.indent + lt + 1);
      }
      // cycles
      std::vector<std::vector<int>> cycles;
      std::string_view cyc = std::string_view(t).substr(gt + 1);
      std::size_t p = 0;
      auto ccol = [&](std::size_t q) { return L.indent + gt + 2 + q; };
      while (true) {
        while (p < cyc.size() && std::isspace(static_cast<unsigned char>(cyc[p]))) {
          ++p;
        }
        if (p == cyc.size()) {
          break;
        }
        if (cyc[p] != '(') {
          throw ParseError("expected '(' in cycles", L.number, ccol(p));
        }
        auto close = cyc.find(')', p);
        if (close == std::string_view::npos) {
          throw ParseError("unterminated cycle", L.number, ccol(p));
        }
        std::vector<int> c;
        std::string_view body = cyc.substr(p + 1, close - p - 1);
        if (!trim(body).empty()) {
          for (auto [piece, o] : split_top(body)) {
            std::string v = trim(piece);
            if (v.empty() || !std::all_of(v.begin(), v.end(), [](char ch) {
                  return std::isdigit(static_cast<unsigned char>(ch));
                })) {
              throw ParseError("bad cycle point '" + v + "'", L.number,
                               ccol(p + 1 + o));
            }
            int x = std::stoi(v);
            if (x < 1 || static_cast<std::size_t>(x) > *degree) {
              throw ParseError("cycle point " + v + " not in 1.." +
                                   std::to_string(*degree),
                               L.number, ccol(p + 1 + o));
            }
            c.push_back(x);
          }
        }
        cycles.push_back(std::move(c));
        p = close + 1;
      }
      try {
        row.perm = Permutation::from_cycles(*degree, cycles);
      } catch (std::exception const& e) {
        throw ParseError(e.what(), L.number, ccol(0));
      }
      rows[*gi - 1] = std::move(row);
    }
  }
  bool any = std::any_of(rows.begin(), rows.end(),
                         [](auto const& r) { return r.has_value(); });
  if (any) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (!rows[i]) {
        throw ParseError("no row for generator '" +
                             f.source.name(static_cast<int>(i) + 1) + "'",
                         lines.back().number, 1);
      }
      f.rows.push_back(std::move(*rows[i]));
    }
  }
  f.defines = std::move(defines);
  return f;
}

MachineFile read_machine_file(std::string const& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path);
  }
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_machine(ss.str());
  } catch (ParseError const& e) {
    throw ParseError(path + ": " + e.what(), e.line(), e.column());
  }
}

SphereMachine MachineFile::machine(bool require) const {
  if (rows.empty()) {
    throw MalformedMachine("file has no machine rows");
  }
  SphereMachine M(source, target(), rows);
  if (require) {
    M.require_relator();
  }
  return M;
}

std::optional<AutomorphismSpec> MachineFile::find_automorphism(
    std::string_view name) const {
  for (auto const& a : automorphisms) {
    if (a.name == name) {
      return a;
    }
  }
  return std::nullopt;
}

Automorphism MachineFile::automorphism(std::string_view name) const {
  auto a = find_automorphism(name);
  if (!a) {
    throw std::invalid_argument("no automorphism named '" + std::string(name) +
                                "'");
  }
  return Automorphism(a->on_target ? target() : source, a->images);
}

bool MachineFile::operator==(MachineFile const& o) const {
  return declared == o.declared && source == o.source &&
         target_declared == o.target_declared &&
         target_group == o.target_group && rows == o.rows &&
         curves == o.curves && target_curves == o.target_curves &&
         automorphisms == o.automorphisms && labels == o.labels;
}

namespace {

std::string word_list(std::vector<Word> const& ws, SphereGroup const& G) {
  std::vector<std::string> s;
  for (auto const& w : ws) {
    s.push_back(G.format(w));
  }
  return join(s, ", ");
}

std::string row_text(std::string const& name, std::vector<std::string> const& entries,
                     Permutation const& p) {
  return name + "=<" + join(entries, ",") + ">" + p.to_string();
}

}  // namespace

std::string print_machine(MachineFile const& f) {
  std::ostringstream out;
  out << "generators: " << join(f.declared, ", ") << "\n";
  if (f.source.names() != f.declared) {
    out << "relator: " << join(f.source.names(), "*") << "\n";
  }
  if (f.target_group) {
    out << "target-generators: " << join(f.target_declared, ", ") << "\n";
    if (f.target_group->names() != f.target_declared) {
      out << "target-relator: " << join(f.target_group->names(), "*") << "\n";
    }
  }
  SphereGroup const& H = f.target();
  if (!f.rows.empty()) {
    out << "degree: " << f.rows.front().entries.size() << "\n";
    for (auto const& name : f.declared) {
      auto const& r = f.rows[*f.source.index_of(name) - 1];
      std::vector<std::string> e;
      for (auto const& w : r.entries) {
        e.push_back(w.empty() ? "" : H.format(w));
      }
      out << row_text(name, e, r.perm) << "\n";
    }
  }
  if (!f.curves.empty()) {
    out << "curves: " << word_list(f.curves, f.source) << "\n";
  }
  if (!f.target_curves.empty()) {
    out << "target-curves: " << word_list(f.target_curves, H) << "\n";
  }
  for (auto const& a : f.automorphisms) {
    SphereGroup const& G = a.on_target ? H : f.source;
    auto const& decl =
        a.on_target && !f.target_declared.empty() ? f.target_declared : f.declared;
    std::vector<Word> im;
    for (auto const& n : decl) {
      im.push_back(a.images[*G.index_of(n) - 1]);
    }
    out << (a.on_target ? "target-automorphism " : "automorphism ") << a.name
        << ": " << word_list(im, G) << "\n";
  }
  if (!f.labels.empty()) {
    out << "labels: " << join(f.labels, ", ") << "\n";
  }
  return out.str();
}

std::string format_row(SphereMachine const& M, int i) {
  auto const& r = M.row(i);
  std::vector<std::string> e;
  for (auto const& w : r.entries) {
    e.push_back(w.empty() ? "" : M.target().pretty(w));
  }
  return row_text(M.source().name(i), e, r.perm);
}

std::string format_machine(SphereMachine const& M) {
  std::ostringstream out;
  out << "generators: " << join(M.source().names(), ", ") << "\n";
  if (!(M.source() == M.target())) {
    out << "target-generators: " << join(M.target().names(), ", ") << "\n";
  }
  out << "degree: " << M.degree() << "\n";
  for (int i = 1; i <= M.source().size(); ++i) {
    out << format_row(M, i) << "\n";
  }
  return out.str();
}

MachineFile to_file(SphereMachine const& M) {
  MachineFile f;
  f.declared = M.source().names();
  f.source = M.source();
  if (!(M.source() == M.target())) {
    f.target_declared = M.target().names();
    f.target_group = M.target();
  }
  f.rows = M.rows();
  return f;
}

}  // namespace sphmach
