// Command-line front end: simulation runs, parameter sweeps and the analytic
// service-time table.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "papsim/papsim.hpp"

namespace {

using namespace papsim;

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

ScenarioConfig
load_config (const std::string &path)
{
  std::ifstream in (path);
  if (!in)
    throw ConfigError (ConfigError::Kind::Malformed, "config", "cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf ();
  return parse_config (text.str ());
}

std::ofstream
open_out (const std::string &path)
{
  std::ofstream out (path);
  if (!out)
    throw Error ("cannot write " + path);
  return out;
}

void
print_summary (const ScenarioResult &res)
{
  const ScenarioConfig &c = res.config;
  std::printf ("%s [%s] fi=%gs sessions=%d bad=%d flr=%g reps=%d\n", c.name.c_str (), to_string (c.algorithm), c.fi_s,
               c.n_sessions, c.bad_sessions, c.flr, c.replications);
  for (const char *g : {"good", "bad", "aggregate"})
    if (const ResultRow *r = res.mean_row (g))
      std::printf ("  %-9s throughput %10.1f b/s  delay %8.2f ms  loss %7.4f  MOS %.3f\n", g, r->throughput_bps,
                   1000.0 * r->mean_delay_s, r->loss_ratio, r->mos);

  HeadServiceStats good, bad;
  for (const auto &rep : res.replications)
    {
      good.sum += rep.ap_head_good.sum;
      good.count += rep.ap_head_good.count;
      bad.sum += rep.ap_head_bad.sum;
      bad.count += rep.ap_head_bad.count;
    }
  const auto t = analytic::timing_from_mac (c.mac, c.codec ().sdu_bytes ());
  analytic::ServiceParams sp;
  sp.w = c.mac.cw_min;
  sp.m = c.mac.short_retry - 1;
  sp.sigma = c.mac.slot;
  sp.ts = analytic::t_success (t);
  sp.tf = analytic::t_fail (t);
  std::printf ("  AP head service: good %.3f ms (%lld frames)", 1000.0 * good.mean_s (),
               static_cast<long long> (good.count));
  if (bad.count)
    {
      sp.p = c.flr;
      std::printf (", bad %.3f ms (%lld frames, analytic %.3f ms)", 1000.0 * bad.mean_s (),
                   static_cast<long long> (bad.count), 1000.0 * analytic::expected_service_time (sp).seconds ());
    }
  std::printf ("\n  loss allowed at 150 ms for MOS 3.6: %.4f\n", mos_loss_bound (0.150, 3.6));
}

std::vector<double>
parse_grid (const std::string &text)
{
  std::vector<double> out;
  std::stringstream ss (text);
  std::string item;
  while (std::getline (ss, item, ','))
    {
      std::size_t used = 0;
      double v = 0;
      try
        {
          v = std::stod (item, &used);
        }
      catch (const std::exception &)
        {
          used = std::string::npos;
        }
      if (used != item.size ())
        throw ConfigError (ConfigError::Kind::Malformed, "p-grid", "bad entry '" + item + "'");
      if (!(v >= 0.0 && v <= 1.0))
        throw ConfigError (ConfigError::Kind::OutOfRange, "p-grid", item + " is outside [0,1]");
      out.push_back (v);
    }
  if (out.empty ())
    throw ConfigError (ConfigError::Kind::MissingRequired, "p-grid");
  return out;
}

} // namespace

int
main (int argc, char **argv)
{
  CLI::App app{"802.11b DCF voice simulator"};
  app.require_subcommand (1);

  std::string config, out, vary, grid;
  std::optional<std::uint64_t> seed;
  std::optional<int> reps;
  int from = 0, to = 0, w = 31, m = 6;
  double fi = 0.02;

  auto *run = app.add_subcommand ("run", "simulate one scenario");
  run->add_option ("--config", config, "scenario file")->required ();
  run->add_option ("--seed", seed, "master seed");
  run->add_option ("--reps", reps, "number of replications")->check (CLI::PositiveNumber);
  run->add_option ("--out", out, "CSV output")->required ();

  auto *sw = app.add_subcommand ("sweep", "simulate a range of one integer key");
  sw->add_option ("--config", config, "scenario file")->required ();
  sw->add_option ("--vary", vary, "n_sessions or bad_sessions")->required ();
  sw->add_option ("--from", from, "first value")->required ();
  sw->add_option ("--to", to, "last value")->required ();
  sw->add_option ("--out", out, "CSV output")->required ();

  auto *an = app.add_subcommand ("analytic", "expected head-of-line service time");
  an->add_option ("--p-grid", grid, "comma-separated failure probabilities")->required ();
  an->add_option ("--w", w, "minimum contention window")->required ()->check (CLI::PositiveNumber);
  an->add_option ("--m", m, "retry limit")->required ()->check (CLI::NonNegativeNumber);
  an->add_option ("--fi", fi, "framing interval in seconds")->capture_default_str ();
  an->add_option ("--out", out, "CSV output")->required ();

  try
    {
      app.parse (argc, argv);
    }
  catch (const CLI::ParseError &e)
    {
      const int rc = app.exit (e);
      return rc == 0 ? 0 : kExitConfig;
    }

  try
    {
      if (*run)
        {
          ScenarioConfig c = load_config (config);
          if (seed)
            c.seed = *seed;
          if (reps)
            c.replications = *reps;
          c.validate ();
          auto os = open_out (out);
          const ScenarioResult res = run_scenario (c);
          write_csv (os, res.rows);
          print_summary (res);
        }
      else if (*sw)
        {
          const ScenarioConfig c = load_config (config);
          const SweepKey key = parse_sweep_key (vary);
          if (key == SweepKey::BadSessions && (from < 0 || to > c.n_sessions))
            throw ConfigError (ConfigError::Kind::OutOfRange, "bad_sessions", "sweep range must lie in [0, n_sessions]");
          if (key == SweepKey::Sessions && (from < 1 || from < c.bad_sessions))
            throw ConfigError (ConfigError::Kind::OutOfRange, "n_sessions", "sweep range must cover bad_sessions");
          auto os = open_out (out);
          bool header = true;
          for (const auto &res : sweep (c, key, from, to))
            {
              write_csv (os, res.rows, header);
              header = false;
              print_summary (res);
            }
        }
      else if (*an)
        {
          ScenarioConfig c;
          c.fi_s = fi;
          c.validate ();
          const auto t = analytic::timing_from_mac (c.mac, c.codec ().sdu_bytes ());
          analytic::ServiceParams sp;
          sp.w = w;
          sp.m = m;
          sp.sigma = c.mac.slot;
          sp.ts = analytic::t_success (t);
          sp.tf = analytic::t_fail (t);
          const auto rows = analytic::hol_gap_report (sp, parse_grid (grid), c.mac.cw_max + 1);
          auto os = open_out (out);
          os << "p,w,m,ts_s,tf_s,expected_service_s,expected_service_capped_s\n";
          for (const auto &r : rows)
            os << format_g6 (r.p) << ',' << w << ',' << m << ',' << format_g6 (sp.ts.seconds ()) << ','
               << format_g6 (sp.tf.seconds ()) << ',' << format_g6 (r.expected.seconds ()) << ','
               << format_g6 (r.expected_capped.seconds ()) << '\n';
        }
    }
  catch (const ConfigError &e)
    {
      std::cerr << "config error: " << e.what () << '\n';
      return kExitConfig;
    }
  catch (const std::exception &e)
    {
      std::cerr << "error: " << e.what () << '\n';
      return kExitRuntime;
    }
  return 0;
}
