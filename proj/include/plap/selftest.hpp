#pragma once

#include <string>
#include <vector>

namespace plap {

struct SelfCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Quick property checks of every module, cheap enough for a smoke test.
std::vector<SelfCheck> run_selftest();

}  // namespace plap
