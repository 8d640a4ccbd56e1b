#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace phrg::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kNo = 1;  // empty, non-member
inline constexpr int kUsage = 2;
inline constexpr int kUnsupported = 3;

// args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace phrg::cli
