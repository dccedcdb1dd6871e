#include "sphmach/mcb_json.hpp"

#include <fstream>
#include <stdexcept>

#include "sphmach/parse.hpp"

namespace sphmach {

namespace {

using nlohmann::json;

constexpr char const* kFormat = "sphmach-mcb/1";

json images_json(Automorphism const& a, SphereGroup const& G) {
  json out = json::array();
  for (auto const& w : a.images()) {
    out.push_back(G.format(w));
  }
  return out;
}

Automorphism images_from(json const& j, SphereGroup const& G) {
  std::vector<Word> im;
  for (auto const& s : j) {
    im.push_back(parse_word(s.get<std::string>(), G));
  }
  if (im.size() != static_cast<std::size_t>(G.size())) {
    throw std::invalid_argument("mcb: automorphism needs " +
                                std::to_string(G.size()) + " images");
  }
  return Automorphism(G, std::move(im));
}

SphereMachine machine_from(json const& j) {
  return parse_machine(j.get<std::string>()).machine();
}

}  // namespace

json mcb_to_json(MappingClassBiset const& mcb) {
  json doc;
  doc["format"] = kFormat;
  doc["acting"] = {{"generators", mcb.gen_names},
                   {"relations", !mcb.free_alphabet}};
  doc["labels"] = mcb.labels;
  std::optional<SphereGroup> src;
  std::optional<SphereGroup> tgt;
  if (mcb.base) {
    src = mcb.base->source();
    tgt = mcb.base->target();
    doc["base"] = format_machine(*mcb.base);
    json gens = json::array();
    for (std::size_t g = 0; g < mcb.gen_maps.size(); ++g) {
      gens.push_back({{"name", mcb.gen_names[g]},
                      {"images", images_json(mcb.gen_maps[g], *src)}});
    }
    doc["twists"] = gens;
    json basis = json::array();
    for (auto const& M : mcb.basis) {
      basis.push_back(format_machine(M));
    }
    doc["basis"] = basis;
  }
  json table = json::array();
  for (std::size_t g = 0; g < mcb.table.size(); ++g) {
    for (std::size_t k = 0; k < mcb.table[g].size(); ++k) {
      auto const& tr = mcb.table[g][k];
      json rec = {{"gen", mcb.gen_names[g]},
                  {"from", k},
                  {"to", tr.next}};
      if (tr.word) {
        rec["word"] = mcb.acting.format(*tr.word);
      }
      if (tr.knitting && tgt) {
        rec["knitting"] = images_json(*tr.knitting, *tgt);
      }
      if (tr.change && tgt) {
        json conj = json::array();
        for (auto const& w : tr.change->conjugators) {
          conj.push_back(tgt->format(w));
        }
        std::vector<int> rel;
        for (std::size_t s = 0; s < tr.change->relabel.degree(); ++s) {
          rel.push_back(tr.change->relabel(static_cast<int>(s)) + 1);
        }
        rec["conjugators"] = conj;
        rec["relabel"] = rel;
      }
      table.push_back(rec);
    }
  }
  doc["table"] = table;
  return doc;
}

MappingClassBiset mcb_from_json(json const& doc) {
  try {
    if (doc.value("format", "") != kFormat) {
      throw std::invalid_argument("mcb: expected format " +
                                  std::string(kFormat));
    }
    MappingClassBiset mcb;
    mcb.gen_names =
        doc.at("acting").at("generators").get<std::vector<std::string>>();
    bool relations = doc.at("acting").value("relations", false);
    mcb.free_alphabet = !relations;
    mcb.acting = relations ? SphereGroup(mcb.gen_names)
                           : free_alphabet_group(mcb.gen_names);
    mcb.labels = doc.at("labels").get<std::vector<std::string>>();
    std::optional<SphereGroup> tgt;
    if (doc.contains("base")) {
      mcb.base = machine_from(doc["base"]);
      tgt = mcb.base->target();
      for (auto const& g : doc.at("twists")) {
        mcb.gen_maps.push_back(images_from(g.at("images"),
                                           mcb.base->source()));
      }
      for (auto const& m : doc.at("basis")) {
        mcb.basis.push_back(machine_from(m));
      }
    }
    std::size_t n = mcb.labels.size();
    mcb.table.assign(mcb.gen_names.size(), std::vector<Transition>(n));
    std::vector<std::vector<bool>> filled(mcb.gen_names.size(),
                                          std::vector<bool>(n, false));
    for (auto const& rec : doc.at("table")) {
      auto g = mcb.gen_index(rec.at("gen").get<std::string>());
      std::size_t k = rec.at("from").get<std::size_t>();
      int to = rec.at("to").get<int>();
      if (!g || k >= n || to < 0 || static_cast<std::size_t>(to) >= n) {
        throw std::invalid_argument("mcb: table record out of range");
      }
      if (filled[*g - 1][k]) {
        throw std::invalid_argument("mcb: duplicate table record");
      }
      filled[*g - 1][k] = true;
      Transition& tr = mcb.table[*g - 1][k];
      tr.next = to;
      if (rec.contains("word")) {
        tr.word = mcb.acting.normal_form(
            parse_word(rec["word"].get<std::string>(), mcb.acting));
      }
      if (rec.contains("knitting") && tgt) {
        tr.knitting = images_from(rec["knitting"], *tgt);
      }
      if (rec.contains("conjugators") && tgt) {
        BasisChange b;
        for (auto const& w : rec["conjugators"]) {
          b.conjugators.push_back(
              tgt->normal_form(parse_word(w.get<std::string>(), *tgt)));
        }
        std::vector<int> rel;
        for (int x : rec.at("relabel").get<std::vector<int>>()) {
          rel.push_back(x - 1);
        }
        b.relabel = Permutation(std::move(rel));
        tr.change = std::move(b);
      }
    }
    for (auto const& row : filled) {
      for (bool f : row) {
        if (!f) {
          throw std::invalid_argument("mcb: table is not closed");
        }
      }
    }
    for (std::size_t g = 1; g <= mcb.gen_names.size(); ++g) {
      (void)mcb.action(static_cast<int>(g));  // must be a permutation
    }
    return mcb;
  } catch (json::exception const& e) {
    throw std::invalid_argument(std::string("mcb: ") + e.what());
  }
}

MappingClassBiset read_mcb_file(std::string const& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open " + path);
  }
  try {
    return mcb_from_json(json::parse(in));
  } catch (json::parse_error const& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

}  // namespace sphmach
