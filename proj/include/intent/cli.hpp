#pragma once

#include <iosfwd>

namespace intent::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitBind = 3;

/// Entry point of the intent_cli tool. Regular output goes to `out` unless
/// --out is given; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace intent::cli
