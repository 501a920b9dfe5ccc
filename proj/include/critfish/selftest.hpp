#pragma once

#include <functional>
#include <string>

namespace critfish {

/// Runs a quick oracle-agreement suite (analytic toy model vs numerics,
/// cross-method QFI, commuting case, estimator ordering, CSV round trip).
/// Each check reports one "PASS ..." or "FAIL ..." line through `sink`.
/// Returns true when every check passed.
bool run_selftest(const std::function<void(const std::string&)>& sink);

}  // namespace critfish
