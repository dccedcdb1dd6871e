// The machine text format.
//
//   # comment
//   generators: x1, x2, x3
//   relator: x1*x2*x3            (optional, reorders the relator)
//   target-generators: ...       (optional, non-dynamical machines)
//   target-relator: ...
//   degree: 2                    (optional, otherwise from the first row)
//   define s = x1*x2             (names usable in later words)
//   x1=<,x3>(1,2)
//   curves: x1*x2, ...           (source group)
//   target-curves: ...
//   automorphism sigma: w1, w2, w3        (images in declaration order)
//   target-automorphism psi: ...
//   labels: f_R, f_R t           (names for basis machines)
#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sphmach/machine.hpp"

namespace sphmach {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string const& msg, std::size_t line, std::size_t column);
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

struct AutomorphismSpec {
  std::string name;
  bool on_target = false;
  std::vector<Word> images;  // relator order, unreduced
  bool operator==(AutomorphismSpec const&) const = default;
};

struct MachineFile {
  std::vector<std::string> declared;         // source, declaration order
  SphereGroup source;
  std::vector<std::string> target_declared;  // empty: dynamical
  std::optional<SphereGroup> target_group;
  std::vector<MachineRow> rows;  // relator order, words as written
  std::vector<Word> curves;
  std::vector<Word> target_curves;
  std::vector<AutomorphismSpec> automorphisms;
  std::vector<std::string> labels;
  // macros from define lines, kept for words given later (not compared)
  std::map<std::string, std::string> defines;

  SphereGroup const& target() const {
    return target_group ? *target_group : source;
  }
  bool has_rows() const { return !rows.empty(); }
  // throws MalformedMachine if the relator fails and require_relator is set
  SphereMachine machine(bool require_relator = true) const;
  Automorphism automorphism(std::string_view name) const;
  std::optional<AutomorphismSpec> find_automorphism(std::string_view name) const;

  bool operator==(MachineFile const& other) const;
};

MachineFile parse_machine(std::string_view text);
MachineFile read_machine_file(std::string const& path);
std::string print_machine(MachineFile const& f);

// Words with names of G; '^' binds tighter than '*', its argument is an
// integer, a name or a parenthesized word. defines: name -> word text.
Word parse_word(std::string_view text, SphereGroup const& G,
                std::map<std::string, std::string> const& defines = {});
std::vector<Word> parse_word_list(
    std::string_view text, SphereGroup const& G,
    std::map<std::string, std::string> const& defines = {});

// Canonical text of a machine (rows in relator order, entries pretty
// printed from their normal forms).
std::string format_machine(SphereMachine const& M);
std::string format_row(SphereMachine const& M, int i);
MachineFile to_file(SphereMachine const& M);

}  // namespace sphmach
