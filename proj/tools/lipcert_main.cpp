// lipcert — pointwise Lipschitz profiles, exceptional-set checks, and
// Cantor-type witness certificates from the command line.
//
// Exit codes: 0 success, 1 usage/config error, 2 verification failure,
// 3 construction failure (no seed / search resolution exhausted).

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "lipcert/counterexamples.hpp"
#include "lipcert/json_io.hpp"
#include "lipcert/lipschitz.hpp"
#include "lipcert/witness.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitVerifyFailed = 2;
constexpr int kExitConstructionFailed = 3;

struct Options {
  std::string func_source;
  std::string domain_str;
  double c = 0.0;
  int depth = 6;
  int search_depth = 6;
  int resolution_depth = 12;
  int grid_count = 101;
  double h0 = 0.0;  // 0 = pick from the domain length
  double shrink = 0.5;
  int windows = 8;
  int samples = 5;
  double ratio = 1.0 / 3.0;
  int digit_depth = 40;
  std::string out_path;
  std::string format = "csv";
  std::string cert_path;
};

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    if (content.empty() || content.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw lipcert::SpecError("cannot open output file '" + path + "'");
  out << content;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw lipcert::SpecError("cannot open input file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// --func accepts inline JSON, a JSON file path, or a two-column CSV path
// (ingested as Sampled).
lipcert::FuncSpec load_func(const std::string& source) {
  if (source.empty()) throw lipcert::SpecError("--func is required");
  const std::string trimmed = source.substr(source.find_first_not_of(" \t\n"));
  if (!trimmed.empty() && trimmed.front() == '{') {
    json j = json::parse(trimmed, nullptr, false);
    if (j.is_discarded())
      throw lipcert::SpecError("--func: inline JSON does not parse");
    return lipcert::func_from_json(j);
  }
  if (ends_with(source, ".csv")) {
    std::ifstream in(source);
    if (!in) throw lipcert::SpecError("cannot open csv file '" + source + "'");
    return lipcert::FuncSpec(lipcert::sampled_from_csv(in));
  }
  json j = json::parse(slurp(source), nullptr, false);
  if (j.is_discarded())
    throw lipcert::SpecError("--func: file '" + source + "' is not valid JSON");
  return lipcert::func_from_json(j);
}

lipcert::Interval resolve_domain(const Options& opt, const lipcert::FuncSpec& f) {
  if (!opt.domain_str.empty()) {
    const auto comma = opt.domain_str.find(',');
    if (comma == std::string::npos)
      throw lipcert::SpecError("--domain expects 'a,b'");
    try {
      const double a = std::stod(opt.domain_str.substr(0, comma));
      const double b = std::stod(opt.domain_str.substr(comma + 1));
      return lipcert::Interval(a, b);
    } catch (const std::invalid_argument&) {
      throw lipcert::SpecError("--domain expects two numbers 'a,b'");
    }
  }
  const lipcert::Domain d = f.domain();
  if (!d.bounded())
    throw lipcert::SpecError(
        "--domain is required: the function's natural domain is unbounded");
  return lipcert::Interval(d.lo, d.hi);
}

lipcert::ScaleSchedule resolve_schedule(const Options& opt,
                                        const lipcert::Interval& domain) {
  lipcert::ScaleSchedule s{opt.h0 > 0.0 ? opt.h0 : domain.length() / 16.0,
                           opt.shrink, opt.windows, opt.samples};
  s.validate();
  return s;
}

json failure_document(const char* kind, const std::string& message,
                      const std::string& address = "") {
  json doc{{"version", 1}, {"kind", kind}, {"message", message}};
  if (!address.empty()) doc["address"] = address;
  return doc;
}

int run_profile(const Options& opt) {
  const lipcert::FuncSpec f = load_func(opt.func_source);
  const lipcert::Interval domain = resolve_domain(opt, f);
  const lipcert::LipschitzProfile prof =
      lipcert::profile(f, domain, opt.grid_count, resolve_schedule(opt, domain));
  if (opt.format == "json")
    write_output(opt.out_path, lipcert::profile_to_json(prof).dump(2));
  else
    write_output(opt.out_path, lipcert::profile_to_csv(prof));
  return kExitOk;
}

int run_certify(const Options& opt, const lipcert::FuncSpec& f) {
  const lipcert::Interval domain = resolve_domain(opt, f);
  try {
    const lipcert::WitnessTree tree =
        lipcert::build_tree(f, domain, opt.c, opt.depth, opt.search_depth,
                            opt.resolution_depth);
    const lipcert::CantorCertificate cert = lipcert::certificate(tree);
    write_output(opt.out_path, lipcert::certificate_to_json(tree, cert).dump(2));
    return kExitOk;
  } catch (const lipcert::NoSeedFound& e) {
    write_output(opt.out_path, failure_document("NoSeedFound", e.what()).dump(2));
    std::cerr << "certify: " << e.what() << "\n";
    return kExitConstructionFailed;
  } catch (const lipcert::ResolutionExhausted& e) {
    write_output(opt.out_path,
                 failure_document("ResolutionExhausted", e.what(), e.address)
                     .dump(2));
    std::cerr << "certify: " << e.what() << "\n";
    return kExitConstructionFailed;
  }
}

int run_cantor(const Options& opt) {
  try {
    const lipcert::NonremovabilityReport report = lipcert::nonremovability_demo(
        lipcert::CantorSpec{opt.ratio, opt.digit_depth}, opt.c, opt.depth,
        opt.search_depth, opt.resolution_depth);
    write_output(opt.out_path, lipcert::report_to_json(report).dump(2));
    return report.pass() ? kExitOk : kExitVerifyFailed;
  } catch (const lipcert::NoSeedFound& e) {
    write_output(opt.out_path, failure_document("NoSeedFound", e.what()).dump(2));
    std::cerr << "cantor: " << e.what() << "\n";
    return kExitConstructionFailed;
  } catch (const lipcert::ResolutionExhausted& e) {
    write_output(opt.out_path,
                 failure_document("ResolutionExhausted", e.what(), e.address)
                     .dump(2));
    std::cerr << "cantor: " << e.what() << "\n";
    return kExitConstructionFailed;
  }
}

int run_verify(const Options& opt) {
  json doc = json::parse(slurp(opt.cert_path), nullptr, false);
  if (doc.is_discarded())
    throw lipcert::SpecError("verify: '" + opt.cert_path + "' is not valid JSON");
  const lipcert::VerifyReport report = lipcert::verify_document(doc);
  write_output(opt.out_path, lipcert::report_to_json(report).dump(2));
  if (!report.valid()) {
    std::cerr << "verify: " << report.violations.size() << " violation(s)\n";
    for (const lipcert::Violation& v : report.violations)
      std::cerr << "  [" << to_string(v.kind) << "] at '" << v.address << "': "
                << v.message << "\n";
    return kExitVerifyFailed;
  }
  return kExitOk;
}

int run_check(const Options& opt) {
  const lipcert::FuncSpec f = load_func(opt.func_source);
  const lipcert::Interval domain = resolve_domain(opt, f);
  const lipcert::ScaleSchedule schedule = resolve_schedule(opt, domain);
  try {
    const lipcert::EquivalenceReport eq =
        lipcert::check_equivalence(f, domain, opt.c, opt.grid_count, schedule);

    const lipcert::LipschitzProfile prof = lipcert::profile_at(
        f, domain, lipcert::aligned_grid(f, domain, opt.grid_count), schedule);
    double grid_step = 0.0;
    for (std::size_t i = 1; i < prof.grid_points.size(); ++i)
      grid_step = std::max(grid_step,
                           prof.grid_points[i] - prof.grid_points[i - 1]);
    std::vector<double> xs;
    for (const lipcert::ExceptionalPoint& p :
         lipcert::exceptional_points(prof, opt.c))
      xs.push_back(p.x);
    const lipcert::IsolationReport iso = lipcert::no_isolated_check(xs, grid_step);

    json doc{{"equivalence", lipcert::report_to_json(eq)},
             {"isolation", lipcert::report_to_json(iso)},
             {"exceptionalCount", xs.size()}};
    write_output(opt.out_path, doc.dump(2));
    return kExitOk;
  } catch (const lipcert::DisagreementError& e) {
    json doc{{"kind", "DisagreementError"},
             {"message", e.what()},
             {"maxPointwise", e.max_pointwise},
             {"maxPairwise", e.max_pairwise}};
    write_output(opt.out_path, doc.dump(2));
    std::cerr << "check: " << e.what() << "\n";
    return kExitVerifyFailed;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "pointwise Lipschitz profiles, exceptional-set checks, and Cantor-type "
      "witness certificates"};
  app.require_subcommand(1);
  Options opt;

  auto add_func_opts = [&](CLI::App* cmd, bool required) {
    auto* o = cmd->add_option("--func", opt.func_source,
                              "function: inline JSON, JSON file, or CSV file");
    if (required) o->required();
    cmd->add_option("--domain", opt.domain_str,
                    "closed interval 'a,b' (default: the function's domain)");
  };
  auto add_schedule_opts = [&](CLI::App* cmd) {
    cmd->add_option("--h0", opt.h0, "initial window half-width");
    cmd->add_option("--shrink", opt.shrink, "window shrink factor (0,1)");
    cmd->add_option("--windows", opt.windows, "number of windows (>= 3)");
    cmd->add_option("--samples", opt.samples, "samples per window (>= 4)");
  };
  auto add_out_opt = [&](CLI::App* cmd) {
    cmd->add_option("--out", opt.out_path, "output file (default: stdout)");
  };

  CLI::App* profile_cmd = app.add_subcommand("profile", "grid profile of L(f, x)");
  add_func_opts(profile_cmd, true);
  profile_cmd->add_option("--grid", opt.grid_count, "grid point count (>= 2)");
  add_schedule_opts(profile_cmd);
  add_out_opt(profile_cmd);
  profile_cmd->add_option("--format", opt.format, "csv (default) or json")
      ->check(CLI::IsMember({"csv", "json"}));

  CLI::App* certify_cmd =
      app.add_subcommand("certify", "build and write a witness certificate");
  add_func_opts(certify_cmd, true);
  certify_cmd->add_option("--C", opt.c, "exceptional-set level C >= 0")->required();
  certify_cmd->add_option("--depth", opt.depth, "tree depth (>= 1)")->required();
  certify_cmd->add_option("--search-depth", opt.search_depth,
                          "dyadic split search depth");
  certify_cmd->add_option("--resolution-depth", opt.resolution_depth,
                          "seed scan depth");
  add_out_opt(certify_cmd);

  CLI::App* cantor_cmd = app.add_subcommand(
      "cantor", "non-removability demo for a Cantor staircase");
  cantor_cmd->add_option("--ratio", opt.ratio, "staircase ratio in (0, 1/2)");
  cantor_cmd->add_option("--digit-depth", opt.digit_depth,
                         "staircase digit depth (>= 1)");
  cantor_cmd->add_option("--C", opt.c, "exceptional-set level C >= 0");
  cantor_cmd->add_option("--depth", opt.depth, "witness tree depth")->required();
  cantor_cmd->add_option("--search-depth", opt.search_depth,
                         "dyadic split search depth");
  cantor_cmd->add_option("--resolution-depth", opt.resolution_depth,
                         "seed scan depth");
  add_out_opt(cantor_cmd);

  CLI::App* verify_cmd =
      app.add_subcommand("verify", "re-verify a certificate from scratch");
  verify_cmd->add_option("certificate", opt.cert_path, "certificate JSON file")
      ->required();
  add_out_opt(verify_cmd);

  CLI::App* check_cmd = app.add_subcommand(
      "check", "seminorm equivalence and no-isolated-points reports");
  add_func_opts(check_cmd, true);
  check_cmd->add_option("--C", opt.c, "level C >= 0")->required();
  check_cmd->add_option("--grid", opt.grid_count, "grid point count");
  add_schedule_opts(check_cmd);
  add_out_opt(check_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);  // prints the message or help text
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (app.got_subcommand(profile_cmd)) return run_profile(opt);
    if (app.got_subcommand(certify_cmd))
      return run_certify(opt, load_func(opt.func_source));
    if (app.got_subcommand(cantor_cmd)) return run_cantor(opt);
    if (app.got_subcommand(verify_cmd)) return run_verify(opt);
    if (app.got_subcommand(check_cmd)) return run_check(opt);
  } catch (const lipcert::SpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const lipcert::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const lipcert::ScheduleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const lipcert::NumericalBreakdown& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConstructionFailed;
  } catch (const lipcert::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
