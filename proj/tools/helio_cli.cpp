// Command-line front end: efficiency reports, day sweeps, SVG renders,
// benchmarks and oracle cross-checks.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "helio/field.hpp"
#include "helio/oracle.hpp"
#include "helio/svg.hpp"

namespace {

using namespace helio;

struct SunArgs {
  std::optional<double> eta_deg;
  std::optional<double> theta_deg;
  std::string date;
  std::string hour;

  void add_to(CLI::App& app) {
    app.add_option("--eta", eta_deg, "solar height, degrees");
    app.add_option("--theta", theta_deg, "compass azimuth of the sun, degrees");
    app.add_option("--date", date, "date as MM-DD");
    app.add_option("--hour", hour, "apparent solar time as HH:MM");
  }
};

int parse_minutes(const std::string& hhmm) {
  int h = 0, m = 0;
  char colon = 0;
  std::istringstream in(hhmm);
  if (!(in >> h >> colon >> m) || colon != ':' || !in.eof() || h < 0 || h > 24 || m < 0 || m > 59) {
    throw std::invalid_argument("malformed time '" + hhmm + "', expected HH:MM");
  }
  return h * 60 + m;
}

int parse_day(const std::string& mmdd) {
  int month = 0, day = 0;
  char dash = 0;
  std::istringstream in(mmdd);
  if (!(in >> month >> dash >> day) || dash != '-' || !in.eof()) {
    throw std::invalid_argument("malformed date '" + mmdd + "', expected MM-DD");
  }
  return day_of_year(month, day);
}

std::string clock(int minutes) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d:%02d", minutes / 60, minutes % 60);
  return buf;
}

SunState resolve_sun(const SunArgs& args, double latitude_deg, std::string& when) {
  const bool angles = args.eta_deg || args.theta_deg;
  const bool calendar = !args.date.empty() || !args.hour.empty();
  if (angles == calendar) throw std::invalid_argument("give either --eta/--theta or --date/--hour");
  if (angles) {
    if (!args.eta_deg || !args.theta_deg) throw std::invalid_argument("--eta and --theta go together");
    when = "-";
    return sun_vector(deg_to_rad(*args.eta_deg), deg_to_rad(*args.theta_deg));
  }
  if (args.date.empty() || args.hour.empty()) throw std::invalid_argument("--date and --hour go together");
  const int day = parse_day(args.date);
  const int minutes = parse_minutes(args.hour);
  when = args.date + " " + clock(minutes);
  return sun_at(day, minutes / 60.0, deg_to_rad(latitude_deg));
}

std::vector<OrientedHeliostat> orient_all(const FieldLayout& layout, const SunState& sun) {
  std::vector<OrientedHeliostat> field;
  for (const Heliostat& h : layout.resolve()) field.emplace_back(h, sun);
  return field;
}

std::size_t find_subject(const std::vector<OrientedHeliostat>& field, const std::string& id) {
  const auto it = std::find_if(field.begin(), field.end(), [&](const auto& h) { return h.id() == id; });
  if (it == field.end()) throw std::invalid_argument("unknown heliostat id '" + id + "'");
  return static_cast<std::size_t>(it - field.begin());
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::string record(const EfficiencyResult& r) {
  return r.subject_id + ' ' + format_real(r.efficiency) + ' ' + format_real(r.reflecting_area) + ' ' +
         format_real(r.total_area);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heliostat blocking and shadowing efficiency"};
  app.require_subcommand(1);

  unsigned workers = default_workers();
  app.add_option("--workers", workers, "worker threads (default: HELIO_WORKERS or hardware threads)")
      ->check(CLI::PositiveNumber);

  std::string layout_path, subject, out_path;
  SunArgs sun_args;
  bool no_timing = false;

  auto* eff = app.add_subcommand("efficiency", "per-heliostat or field efficiency report");
  eff->add_option("layout", layout_path, "layout file")->required();
  sun_args.add_to(*eff);
  eff->add_option("--subject", subject, "report only this heliostat");
  eff->add_option("--out", out_path, "report file (default stdout)");
  eff->add_flag("--no-timing", no_timing, "omit the timing header line");

  std::string start = "06:00", end = "18:00";
  int step = 15;
  auto* sweep = app.add_subcommand("sweep", "efficiency of one heliostat over a day");
  sweep->add_option("layout", layout_path, "layout file")->required();
  sweep->add_option("--date", sun_args.date, "date as MM-DD")->required();
  sweep->add_option("--start", start, "first solar time HH:MM");
  sweep->add_option("--end", end, "last solar time HH:MM");
  sweep->add_option("--step", step, "minutes between records")->check(CLI::PositiveNumber);
  sweep->add_option("--subject", subject, "heliostat id")->required();
  sweep->add_option("--out", out_path, "output file (default stdout)");

  auto* render = app.add_subcommand("render", "SVG picture of one heliostat's losses");
  render->add_option("layout", layout_path, "layout file")->required();
  SunArgs render_args;
  render_args.add_to(*render);
  render->add_option("--subject", subject, "heliostat id")->required();
  render->add_option("--out", out_path, "SVG file")->required();

  std::size_t bench_n = 1000;
  int reps = 100;
  std::string bench_layout, bench_date = "01-21", bench_hour = "12:00";
  bool no_cull = false;
  unsigned bench_workers = 1;
  auto* bench = app.add_subcommand("bench", "time full-field evaluations");
  bench->add_option("--n", bench_n, "heliostats in the synthetic field")->check(CLI::PositiveNumber);
  bench->add_option("--reps", reps, "repetitions")->check(CLI::PositiveNumber);
  bench->add_option("--layout", bench_layout, "use this layout instead of a synthetic one");
  bench->add_option("--date", bench_date, "date as MM-DD");
  bench->add_option("--hour", bench_hour, "solar time HH:MM");
  bench->add_option("--threads", bench_workers, "worker threads (default 1)")->check(CLI::PositiveNumber);
  bench->add_flag("--no-cull", no_cull, "disable the quadrant culling step");

  std::size_t samples = 1'000'000;
  bool direct = false, corrupt = false;
  std::uint64_t seed = 1;
  auto* oracle = app.add_subcommand("oracle-check", "compare clipping with dense sampling");
  oracle->add_option("layout", layout_path, "layout file")->required();
  SunArgs oracle_args;
  oracle_args.add_to(*oracle);
  oracle->add_option("--subject", subject, "heliostat id")->required();
  oracle->add_option("--samples", samples, "total samples (rounded to a square)");
  oracle->add_option("--seed", seed, "sampling seed");
  oracle->add_flag("--direct", direct, "trace 3D rays instead of reusing projected quads");
  oracle->add_flag("--corrupt", corrupt, "negative control: displace the first quad");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (eff->parsed()) {
      const FieldLayout layout = load_layout(layout_path);
      std::string when;
      const SunState sun = resolve_sun(sun_args, layout.latitude_deg, when);
      Output out(out_path);
      if (subject.empty()) {
        const FieldReport report = evaluate_field(layout, sun, EvaluateOptions{workers, {}});
        write_report(out.stream(), report, ReportHeader{when, !no_timing});
      } else {
        const auto t0 = std::chrono::steady_clock::now();
        const auto field = orient_all(layout, sun);
        const auto r = efficiency(field[find_subject(field, subject)], field, sun);
        const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        auto& os = out.stream();
        os << "# sun eta=" << format_real(rad_to_deg(sun.eta)) << " theta=" << format_real(rad_to_deg(sun.theta))
           << "\n# date " << when << '\n';
        if (!no_timing) os << "# time_ms " << format_real(ms) << '\n';
        os << "# id efficiency area_reflecting area_total\n" << record(r) << '\n';
      }
    } else if (sweep->parsed()) {
      const FieldLayout layout = load_layout(layout_path);
      const int day = parse_day(sun_args.date);
      const int first = parse_minutes(start), last = parse_minutes(end);
      if (first >= last) throw std::invalid_argument("--start must be before --end");
      Output out(out_path);
      auto& os = out.stream();
      os << "# heliostat " << subject << " date " << sun_args.date << "\n# time eta theta efficiency\n";
      for (int m = first; m <= last; m += step) {
        SunState sun;
        try {
          sun = sun_at(day, m / 60.0, deg_to_rad(layout.latitude_deg));
        } catch (const std::domain_error&) {
          os << "# " << clock(m) << " sun below horizon, skipped\n";
          continue;
        }
        const auto field = orient_all(layout, sun);
        const auto r = efficiency(field[find_subject(field, subject)], field, sun);
        os << clock(m) << ' ' << format_real(rad_to_deg(sun.eta)) << ' ' << format_real(rad_to_deg(sun.theta)) << ' '
           << format_real(r.efficiency) << '\n';
      }
    } else if (render->parsed()) {
      const FieldLayout layout = load_layout(layout_path);
      std::string when;
      const SunState sun = resolve_sun(render_args, layout.latitude_deg, when);
      const auto field = orient_all(layout, sun);
      const auto& s = field[find_subject(field, subject)];
      const auto r = efficiency(s, field, sun);
      std::ofstream svg(out_path);
      if (!svg) throw std::runtime_error("cannot write '" + out_path + "'");
      svg << render_svg(build_scene(s, r, when == "-" ? "" : when));
      if (!svg) throw std::runtime_error("failed writing '" + out_path + "'");
      std::cout << record(r) << '\n';
    } else if (bench->parsed()) {
      const FieldLayout layout = bench_layout.empty() ? synthetic_field(bench_n) : load_layout(bench_layout);
      const SunState sun = sun_at(parse_day(bench_date), parse_minutes(bench_hour) / 60.0, deg_to_rad(layout.latitude_deg));
      EvaluateOptions opts{bench_workers, {}};
      opts.efficiency.cull = !no_cull;
      double total = 0, best = std::numeric_limits<double>::infinity(), average = 0;
      for (int k = 0; k < reps; ++k) {
        const FieldReport report = evaluate_field(layout, sun, opts);
        total += report.seconds;
        best = std::min(best, report.seconds);
        average = report.average;
      }
      std::cout << "heliostats " << layout.heliostats.size() << "\nrepetitions " << reps << "\nmean_ms "
                << format_real(total / reps * 1e3) << "\nmin_ms " << format_real(best * 1e3) << "\nfield_average "
                << format_real(average) << '\n';
    } else if (oracle->parsed()) {
      const FieldLayout layout = load_layout(layout_path);
      std::string when;
      const SunState sun = resolve_sun(oracle_args, layout.latitude_deg, when);
      const auto field = orient_all(layout, sun);
      OracleConfig cfg;
      cfg.samples_per_axis = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(samples))));
      cfg.test = direct ? OcclusionTest::DirectRays : OcclusionTest::ProjectedQuads;
      cfg.seed = seed;
      cfg.workers = workers;
      const auto cmp = oracle_check(field[find_subject(field, subject)], field, sun, cfg, corrupt);
      std::cout << "clipping " << format_real(cmp.clipping) << "\noracle " << format_real(cmp.oracle.estimate)
                << " +- " << format_real(cmp.oracle.standard_error) << " (" << cmp.oracle.samples << " samples)\n"
                << "discrepancy " << format_real(cmp.discrepancy) << " allowance " << format_real(cmp.allowance)
                << '\n'
                << (cmp.pass ? "PASS" : "FAIL") << '\n';
      return cmp.pass ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
