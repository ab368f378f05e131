#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cspadv {

// Exit codes: 0 ok, 2 spec/usage error, 3 precondition violation,
// 4 assertion failure (bench --assert).
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cspadv
