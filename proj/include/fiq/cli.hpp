#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace fiq::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitClaimFailed = 1;
inline constexpr int kExitUsage = 2;

/// Entry point behind the `fiq` executable. `args` excludes the program
/// name. The main JSON (or CSV) document goes to `out`, diagnostics to
/// `err`. Files are written to --out-dir, or $FIQ_OUTPUT_DIR when unset.
int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Writes via a sibling temporary file and rename, so readers never see a
/// partial file.
void write_atomically(const std::filesystem::path& path, const std::string& contents);

}  // namespace fiq::cli
