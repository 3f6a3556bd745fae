#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "selfadj/errors.hpp"
#include "selfadj/potential.hpp"

namespace selfadj::cli {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitInconclusive = 3;

/// Exit code for a library error kind.
int exit_code_for(ErrorKind kind);

/// "start:end:step" with end >= start and step > 0. Points are start + i*step
/// for i = 0..floor((end - start)/step) with a 1e-9 slack on the count.
std::vector<double> parse_grid(std::string_view text);

/// "a:b"; each side accepts "inf" and "-inf".
Interval parse_interval(std::string_view text);

/// Strict decimal number.
double parse_number(std::string_view text, std::string_view what);

/// Two-column CSV "x,q" (header optional).
Potential tabulated_from_csv(const std::string& path, std::optional<Interval> domain);

/// Finds "--config <path>" or "--config=<path>" in args, reads the flat JSON
/// object and appends "--key value" for every key not already given. Nested
/// values are a validation error.
std::vector<std::string> inject_config(std::vector<std::string> args);

/// Writes through a sibling temporary file and renames it into place.
void write_atomically(const std::filesystem::path& path, const std::string& content);

/// Explicit path, else $SELFADJ_OUTPUT_DIR/<stem>.<ext>, else empty (stdout).
std::filesystem::path resolve_output(const std::string& explicit_path, const std::string& stem,
                                     const std::string& ext);

}  // namespace selfadj::cli
