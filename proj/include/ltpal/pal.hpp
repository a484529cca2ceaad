#pragma once

#include <set>
#include <string_view>
#include <vector>

#include "ltpal/formula.hpp"
#include "ltpal/model.hpp"

namespace ltpal {

/// M, w |= phi. Throws EvalError for unknown worlds or agents and for
/// unsubstituted placeholders.
bool pal_sat(const PalModel& model, std::string_view world, const PalFormula& phi);

/// Truth value of phi at every world of the model, in world order.
std::vector<bool> pal_extension(const PalModel& model, const PalFormula& phi);

/// M^psi: the submodel of worlds where psi holds, relations restricted to
/// the survivors. May be empty.
PalModel announce_update(const PalModel& model, const PalFormula& psi);

/// R_A(w): intersection of the blocks of w under every agent of the group.
std::set<WorldId> group_block(const PalModel& model, const std::vector<AgentId>& group,
                              std::string_view world);

}  // namespace ltpal
