#pragma once

#include <string>

#include "json.hpp"
#include "symcol/csolve.hpp"
#include "symcol/hashred.hpp"
#include "symcol/protocol.hpp"

namespace symcol {

using json = nlohmann::ordered_json;

json term_json(const Term& t);
json substitution_json(const Substitution& s);
json derivation_json(const Derivation& d);
json verdict_json(const Verdict& v);
json system_json(const ConstraintSystem& c);
json branch_json(const ReductionBranch& b);
json report_json(const AttackReport& r, bool with_timing);

}  // namespace symcol
