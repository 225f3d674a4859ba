#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "symcol/json_io.hpp"
#include "symcol/protocol.hpp"
#include "symcol/theory.hpp"

namespace py = pybind11;
using namespace symcol;

namespace {

py::object json_to_py(const json& j) {
  switch (j.type()) {
    case json::value_t::null: return py::none();
    case json::value_t::boolean: return py::bool_(j.get<bool>());
    case json::value_t::number_integer: return py::int_(j.get<long long>());
    case json::value_t::number_unsigned: return py::int_(j.get<unsigned long long>());
    case json::value_t::number_float: return py::float_(j.get<double>());
    case json::value_t::string: return py::str(j.get<std::string>());
    case json::value_t::array: {
      py::list out;
      for (const auto& item : j) out.append(json_to_py(item));
      return out;
    }
    case json::value_t::object: {
      py::dict out;
      for (auto it = j.begin(); it != j.end(); ++it)
        out[py::str(it.key())] = json_to_py(it.value());
      return out;
    }
    default: return py::none();
  }
}

std::vector<Term> parse_terms(const std::vector<std::string>& texts) {
  std::vector<Term> out;
  for (const auto& t : texts) out.push_back(parse_term(t));
  return out;
}

SystemTag tag_of(const std::string& name) {
  if (name == "au") return SystemTag::AU;
  if (name == "f") return SystemTag::F;
  if (name == "g") return SystemTag::G;
  if (name == "free") return SystemTag::FREE;
  if (name == "h") return SystemTag::H;
  throw std::invalid_argument("unknown system: " + name);
}

}  // namespace

PYBIND11_MODULE(symcol, m) {
  m.doc() = "symbolic attack search for protocols with collision-vulnerable hashes";

  m.def("parse", [](const std::string& text) { return parse_term(text).str(); },
        py::arg("text"), "parse a term and return its canonical form");

  m.def("normalize", [](const std::string& text) { return normalize(parse_term(text)).str(); },
        py::arg("text"));

  m.def("eq_au", [](const std::string& a, const std::string& b) {
          return eq_modulo_au(parse_term(a), parse_term(b));
        },
        py::arg("a"), py::arg("b"), "equality modulo associativity and unit");

  m.def("eq_hash", [](const std::string& a, const std::string& b) {
          return eq_modulo_h(parse_term(a), parse_term(b));
        },
        py::arg("a"), py::arg("b"), "ground equality modulo the collision equation");

  m.def("subterm_values", [](const std::string& text) {
          std::vector<std::string> out;
          for (const auto& t : subterm_values(parse_term(text), ModeTable::standard()))
            out.push_back(t.str());
          return out;
        },
        py::arg("text"));

  m.def("factors", [](const std::string& text) {
          std::vector<std::string> out;
          for (const auto& t : factors(parse_term(text), ModeTable::standard()))
            out.push_back(t.str());
          return out;
        },
        py::arg("text"));

  m.def("derivable",
        [](const std::vector<std::string>& knowledge, const std::string& goal,
           const std::string& system) {
          auto d = derivable(tag_of(system), parse_terms(knowledge), parse_term(goal));
          json j;
          j["derivable"] = d.has_value();
          if (d) j["derivation"] = derivation_json(*d);
          return json_to_py(j);
        },
        py::arg("knowledge"), py::arg("goal"), py::arg("system") = "h");

  m.def("unify_words",
        [](const std::vector<std::pair<std::string, std::string>>& equations,
           const std::vector<std::pair<std::string, std::string>>& restrictions, int bound) {
          UnificationSystem s;
          for (const auto& [l, r] : equations)
            s.equations.emplace_back(parse_term(l), parse_term(r));
          OrderingConstraint ord;
          for (const auto& [a, b] : restrictions) ord.add(a, b);
          return json_to_py(verdict_json(solve_au_lcr(s, ord, bound)));
        },
        py::arg("equations"), py::arg("restrictions") = std::vector<std::pair<std::string, std::string>>{},
        py::arg("bound") = 8);

  m.def("solve",
        [](const std::vector<std::pair<std::vector<std::string>, std::string>>& steps,
           const std::vector<std::pair<std::string, std::string>>& equations,
           const std::vector<std::pair<std::string, std::string>>& order,
           const std::string& theory, int bound) {
          ConstraintSystem c;
          for (const auto& [know, target] : steps) c.steps.push_back({parse_terms(know), target});
          for (const auto& [l, r] : equations)
            c.eqs.equations.emplace_back(parse_term(l), parse_term(r));
          for (const auto& [a, b] : order) c.order.add(a, b);
          json j;
          if (theory == "au") {
            j = verdict_json(solve_au(c, bound));
          } else if (theory == "f") {
            j = verdict_json(solve_compose(c, Kind::FApp));
          } else if (theory == "g") {
            j = verdict_json(solve_compose(c, Kind::GApp));
          } else if (theory == "free") {
            j = verdict_json(solve_free(c, bound));
          } else if (theory == "h") {
            HSolveResult r = solve_h(c, ReductionLimits{}, bound);
            j = verdict_json(r.verdict);
            j["branches_tried"] = r.branches_tried;
            j["exhausted"] = r.exhausted;
          } else {
            throw std::invalid_argument("unknown theory: " + theory);
          }
          return json_to_py(j);
        },
        py::arg("steps"), py::arg("equations") = std::vector<std::pair<std::string, std::string>>{},
        py::arg("order") = std::vector<std::pair<std::string, std::string>>{},
        py::arg("theory") = "h", py::arg("bound") = 8,
        "solve a deterministic constraint system; steps are (knowledge, target) pairs");

  m.def("analyze",
        [](const std::string& protocol_text, int sessions, bool collisions, long max_branches,
           int max_k, int bound) {
          ProtocolSpec spec = parse_protocol(protocol_text);
          ReductionLimits lim;
          lim.collisions = collisions;
          lim.max_branches = max_branches;
          lim.max_k = max_k;
          AttackReport rep = analyze_protocol(spec, sessions, lim, bound);
          return json_to_py(report_json(rep, /*with_timing=*/false));
        },
        py::arg("protocol_text"), py::arg("sessions") = 1, py::arg("collisions") = true,
        py::arg("max_branches") = 100000, py::arg("max_k") = -1, py::arg("bound") = 8,
        "run the attack search on a protocol narration");
}
