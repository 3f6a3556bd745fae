#include "cli_support.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "selfadj/errors.hpp"
#include "selfadj/report_json.hpp"

namespace selfadj::cli {

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Classification:
    case ErrorKind::Convergence:
    case ErrorKind::Integration:
    case ErrorKind::Integrability:
      return kExitInconclusive;
    default:
      return kExitValidation;
  }
}

double parse_number(std::string_view text, std::string_view what) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
  if (s == "inf" || s == "+inf") return kInfinity;
  if (s == "-inf") return -kInfinity;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || std::isnan(v))
    fail(ErrorKind::Validation, std::string(what) + ": '" + s + "' is not a number");
  return v;
}

std::vector<double> parse_grid(std::string_view text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : text) {
    if (ch == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  require(parts.size() == 3, ErrorKind::Validation, "grid '" + std::string(text) + "' must be start:end:step");
  const double a = parse_number(parts[0], "grid start");
  const double b = parse_number(parts[1], "grid end");
  const double h = parse_number(parts[2], "grid step");
  require(std::isfinite(a) && std::isfinite(b) && std::isfinite(h), ErrorKind::Validation, "grid must be finite");
  require(h > 0.0, ErrorKind::Validation, "grid step must be positive");
  require(b >= a, ErrorKind::Validation, "grid end must not precede its start");
  const double count = std::floor((b - a) / h + 1e-9);
  require(count < 1e6, ErrorKind::Validation, "grid has too many points");
  std::vector<double> out;
  for (int i = 0; i <= static_cast<int>(count); ++i) out.push_back(a + i * h);
  return out;
}

Interval parse_interval(std::string_view text) {
  const auto colon = text.find(':');
  require(colon != std::string_view::npos, ErrorKind::Validation, "interval must be a:b");
  const double a = parse_number(text.substr(0, colon), "interval start");
  const double b = parse_number(text.substr(colon + 1), "interval end");
  require(a < b, ErrorKind::Validation, "interval needs a < b");
  return Interval(a, b);
}

Potential tabulated_from_csv(const std::string& path, std::optional<Interval> domain) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::Validation, "cannot read potential table '" + path + "'");
  std::vector<double> xs, qs;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) fail(ErrorKind::Validation, path + ": line " + std::to_string(lineno) + " needs x,q");
    try {
      xs.push_back(parse_number(std::string_view(line).substr(0, comma), "x"));
      qs.push_back(parse_number(std::string_view(line).substr(comma + 1), "q"));
    } catch (const Error&) {
      if (lineno == 1 && xs.empty()) continue;
      throw;
    }
  }
  require(xs.size() >= 2, ErrorKind::Validation, "potential table needs at least two rows");
  return Potential::tabulated(xs, qs, domain.value_or(Interval(xs.front(), xs.back())));
}

std::vector<std::string> inject_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::Validation, "cannot read config file '" + path + "'");
  report::Json cfg;
  try {
    cfg = report::Json::parse(in);
  } catch (const std::exception& e) {
    fail(ErrorKind::Validation, "config file '" + path + "' is not valid JSON: " + e.what());
  }
  require(cfg.is_object(), ErrorKind::Validation, "config file must hold a flat JSON object");
  auto given = [&args](const std::string& flag) {
    for (const auto& a : args)
      if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    return false;
  };
  for (const auto& [key, value] : cfg.items()) {
    const std::string flag = "--" + key;
    if (given(flag)) continue;
    switch (value.type()) {
      case report::Json::value_t::boolean:
        if (value.get<bool>()) args.push_back(flag);
        break;
      case report::Json::value_t::string:
        args.push_back(flag);
        args.push_back(value.get<std::string>());
        break;
      case report::Json::value_t::number_float:
        args.push_back(flag);
        args.push_back(report::format_double(value.get<double>()));
        break;
      case report::Json::value_t::number_integer:
      case report::Json::value_t::number_unsigned:
        args.push_back(flag);
        args.push_back(value.dump());
        break;
      case report::Json::value_t::null:
        break;
      default:
        fail(ErrorKind::Validation, "config key '" + key + "' must be a scalar");
    }
  }
  return args;
}

void write_atomically(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  std::error_code ec;
  fs::create_directories(dir, ec);
  const fs::path tmp = dir / ("." + path.filename().string() + ".tmp." + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(out), ErrorKind::Validation, "cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    require(static_cast<bool>(out), ErrorKind::Validation, "short write to '" + tmp.string() + "'");
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    fail(ErrorKind::Validation, "cannot move report into '" + path.string() + "': " + ec.message());
  }
}

std::filesystem::path resolve_output(const std::string& explicit_path, const std::string& stem,
                                     const std::string& ext) {
  if (!explicit_path.empty()) return explicit_path;
  if (const char* dir = std::getenv("SELFADJ_OUTPUT_DIR"); dir && *dir)
    return std::filesystem::path(dir) / (stem + "." + ext);
  return {};
}

}  // namespace selfadj::cli
