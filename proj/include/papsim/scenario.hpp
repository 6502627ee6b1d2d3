#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "papsim/analytic_model.hpp"
#include "papsim/dcf_mac.hpp"
#include "papsim/errors.hpp"
#include "papsim/event_scheduler.hpp"
#include "papsim/metrics.hpp"
#include "papsim/pap_control.hpp"
#include "papsim/voice_traffic.hpp"

namespace papsim {

enum class Algorithm { Baseline, Pap };

inline const char *
to_string (Algorithm a)
{
  return a == Algorithm::Pap ? "pap" : "baseline";
}

/// Session count presets for the high (75%) and medium (50%) load points.
inline int
load_preset (std::string_view level, SimTime fi)
{
  const bool fi20 = fi == SimTime::from_ms (20);
  const bool fi40 = fi == SimTime::from_ms (40);
  if (!fi20 && !fi40)
    throw ConfigError (ConfigError::Kind::OutOfRange, "n_sessions", "load presets exist for fi_s 0.02 and 0.04 only");
  if (level == "high")
    return fi20 ? 10 : 18;
  if (level == "medium")
    return fi20 ? 7 : 13;
  throw ConfigError (ConfigError::Kind::Malformed, "n_sessions", "expected an integer, 'high' or 'medium'");
}

struct ScenarioConfig
{
  std::string name = "scenario";
  Algorithm algorithm = Algorithm::Baseline;
  double fi_s = 0.02;
  int n_sessions = 1;
  int bad_sessions = 0;
  double flr = 0.0;
  double duration_s = 600.0;
  double warmup_s = 10.0;
  int replications = 10;
  std::uint64_t seed = 1;
  ClassifierMode classifier = ClassifierMode::Oracle;
  EstimatorThresholds estimator;
  double on_mean_s = 1.0;
  double off_mean_s = 0.25;
  int z_good_step = 1; // tenths added to Z per completed good-channel frame
  MacConfig mac;

  SimTime framing_interval () const { return SimTime::from_seconds (fi_s); }
  VoiceCodec codec () const
  {
    VoiceCodec c;
    c.framing_interval = framing_interval ();
    return c;
  }

  void validate () const
  {
    using K = ConfigError::Kind;
    if (!(fi_s > 0.0))
      throw ConfigError (K::OutOfRange, "fi_s", "must be positive");
    try
      {
        (void) codec ().payload_bytes ();
      }
    catch (const NonIntegralPayload &e)
      {
        throw ConfigError (K::OutOfRange, "fi_s", e.what ());
      }
    if (n_sessions < 1)
      throw ConfigError (K::OutOfRange, "n_sessions", "must be >= 1");
    if (bad_sessions < 0 || bad_sessions > n_sessions)
      throw ConfigError (K::OutOfRange, "bad_sessions", "must be within [0, n_sessions]");
    if (!(flr >= 0.0 && flr <= 1.0))
      throw ConfigError (K::OutOfRange, "flr", "must be within [0,1]");
    if (!(warmup_s >= 0.0))
      throw ConfigError (K::OutOfRange, "warmup_s", "must be >= 0");
    if (!(duration_s > warmup_s))
      throw ConfigError (K::OutOfRange, "duration_s", "must exceed warmup_s");
    if (replications < 1)
      throw ConfigError (K::OutOfRange, "replications", "must be >= 1");
    if (!(on_mean_s > 0.0))
      throw ConfigError (K::OutOfRange, "on_mean_s", "must be positive");
    if (!(off_mean_s >= 0.0))
      throw ConfigError (K::OutOfRange, "off_mean_s", "must be >= 0");
    if (estimator.failures_to_bad < 1)
      throw ConfigError (K::OutOfRange, "estimator_fail_threshold", "must be >= 1");
    if (estimator.successes_to_good < 1)
      throw ConfigError (K::OutOfRange, "estimator_success_threshold", "must be >= 1");
    if (z_good_step < 0 || z_good_step > 10)
      throw ConfigError (K::OutOfRange, "z_good_step", "must be within [0,10]");
    try
      {
        mac.validate ();
      }
    catch (const ConfigError &)
      {
        throw;
      }
    catch (const Error &e)
      {
        throw ConfigError (K::OutOfRange, "mac", e.what ());
      }
  }
};

namespace detail {

inline std::string_view
trim (std::string_view s)
{
  const auto b = s.find_first_not_of (" \t\r");
  if (b == std::string_view::npos)
    return {};
  const auto e = s.find_last_not_of (" \t\r");
  return s.substr (b, e - b + 1);
}

template <typename T>
T
parse_number (std::string_view key, std::string_view v)
{
  T out{};
  const auto *end = v.data () + v.size ();
  auto [ptr, ec] = std::from_chars (v.data (), end, out);
  if (ec != std::errc () || ptr != end)
    throw ConfigError (ConfigError::Kind::Malformed, std::string (key), "cannot parse '" + std::string (v) + "'");
  return out;
}

inline double
parse_finite (std::string_view key, std::string_view v)
{
  const double d = parse_number<double> (key, v);
  if (!std::isfinite (d))
    throw ConfigError (ConfigError::Kind::OutOfRange, std::string (key), "must be finite");
  return d;
}

inline SimTime
parse_us (std::string_view key, std::string_view v)
{
  return SimTime::from_ns (std::llround (parse_finite (key, v) * 1000.0));
}

} // namespace detail

/// Parses flat `key = value` lines; `#` starts a comment.
inline ScenarioConfig
parse_config (std::string_view text)
{
  using K = ConfigError::Kind;
  using detail::parse_finite;
  using detail::parse_number;
  using detail::parse_us;

  ScenarioConfig c;
  std::map<std::string, std::string, std::less<>> kv;
  std::size_t pos = 0;
  while (pos <= text.size ())
    {
      const auto nl = text.find ('\n', pos);
      std::string_view line = text.substr (pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
      pos = nl == std::string_view::npos ? text.size () + 1 : nl + 1;
      if (auto h = line.find ('#'); h != std::string_view::npos)
        line = line.substr (0, h);
      line = detail::trim (line);
      if (line.empty ())
        continue;
      const auto eq = line.find ('=');
      if (eq == std::string_view::npos)
        throw ConfigError (K::Malformed, std::string (line), "expected key = value");
      const std::string key (detail::trim (line.substr (0, eq)));
      const std::string value (detail::trim (line.substr (eq + 1)));
      if (key.empty ())
        throw ConfigError (K::Malformed, std::string (line), "empty key");
      if (!kv.emplace (key, value).second)
        throw ConfigError (K::Malformed, key, "duplicate key");
    }

  for (const char *req : {"algorithm", "fi_s", "n_sessions"})
    if (!kv.count (req))
      throw ConfigError (K::MissingRequired, req);

  std::optional<std::string> sessions_text;
  for (const auto &[key, v] : kv)
    {
      if (key == "name")
        c.name = v;
      else if (key == "algorithm")
        {
          if (v == "baseline")
            c.algorithm = Algorithm::Baseline;
          else if (v == "pap")
            c.algorithm = Algorithm::Pap;
          else
            throw ConfigError (K::OutOfRange, key, "expected baseline or pap");
        }
      else if (key == "fi_s")
        c.fi_s = parse_finite (key, v);
      else if (key == "n_sessions")
        sessions_text = v;
      else if (key == "bad_sessions")
        c.bad_sessions = parse_number<int> (key, v);
      else if (key == "flr")
        c.flr = parse_finite (key, v);
      else if (key == "duration_s")
        c.duration_s = parse_finite (key, v);
      else if (key == "warmup_s")
        c.warmup_s = parse_finite (key, v);
      else if (key == "replications")
        c.replications = parse_number<int> (key, v);
      else if (key == "seed")
        c.seed = parse_number<std::uint64_t> (key, v);
      else if (key == "classifier")
        {
          if (v == "oracle")
            c.classifier = ClassifierMode::Oracle;
          else if (v == "estimator")
            c.classifier = ClassifierMode::Estimator;
          else
            throw ConfigError (K::OutOfRange, key, "expected oracle or estimator");
        }
      else if (key == "estimator_fail_threshold")
        c.estimator.failures_to_bad = parse_number<int> (key, v);
      else if (key == "estimator_success_threshold")
        c.estimator.successes_to_good = parse_number<int> (key, v);
      else if (key == "on_mean_s")
        c.on_mean_s = parse_finite (key, v);
      else if (key == "off_mean_s")
        c.off_mean_s = parse_finite (key, v);
      else if (key == "z_good_step")
        c.z_good_step = parse_number<int> (key, v);
      else if (key == "slot_us")
        c.mac.slot = parse_us (key, v);
      else if (key == "sifs_us")
        c.mac.sifs = parse_us (key, v);
      else if (key == "difs_us")
        c.mac.difs = parse_us (key, v);
      else if (key == "cw_min")
        c.mac.cw_min = parse_number<int> (key, v);
      else if (key == "cw_max")
        c.mac.cw_max = parse_number<int> (key, v);
      else if (key == "short_retry")
        c.mac.short_retry = parse_number<int> (key, v);
      else if (key == "long_retry")
        c.mac.long_retry = parse_number<int> (key, v);
      else if (key == "rts_threshold")
        c.mac.rts_threshold = parse_number<int> (key, v);
      else if (key == "data_rate_bps")
        c.mac.data_rate_bps = parse_number<std::int64_t> (key, v);
      else if (key == "plcp_us")
        c.mac.plcp_overhead = parse_us (key, v);
      else if (key == "mac_overhead_bytes")
        c.mac.mac_overhead_bytes = parse_number<int> (key, v);
      else if (key == "ack_bytes")
        c.mac.ack_bytes = parse_number<int> (key, v);
      else if (key == "ack_rate_bps")
        c.mac.ack_rate_bps = parse_number<std::int64_t> (key, v);
      else if (key == "prop_delay_us")
        c.mac.prop_delay = parse_us (key, v);
      else
        throw ConfigError (K::UnknownKey, key);
    }

  if (*sessions_text == "high" || *sessions_text == "medium")
    c.n_sessions = load_preset (*sessions_text, c.framing_interval ());
  else
    c.n_sessions = parse_number<int> ("n_sessions", *sessions_text);
  if (c.bad_sessions > 0 && !kv.count ("flr"))
    throw ConfigError (K::MissingRequired, "flr", "required when bad_sessions > 0");
  c.validate ();
  return c;
}

// ----------------------------------------------------------------------------

struct HeadServiceStats
{
  SimTime sum;
  std::int64_t count = 0;
  double mean_s () const { return count ? sum.seconds () / static_cast<double> (count) : 0.0; }
};

struct ReplicationResult
{
  std::uint64_t seed = 0;
  std::vector<FlowStats> flows;
  std::vector<std::int64_t> resident;     // counted SDUs still queued anywhere
  std::vector<bool> lossy;                // per session
  HeadServiceStats ap_head_good;
  HeadServiceStats ap_head_bad;
  std::uint64_t ap_successes = 0;
  std::uint64_t uplink_drops = 0;
  std::uint64_t uplink_drops_blocked = 0;     // final attempt reached the AP and was withheld
  std::uint64_t uplink_drops_after_block = 0; // earlier attempt withheld, final one collided
  int bda_peak_streak = 0;
  std::uint64_t bda_blocked = 0;
  std::uint64_t carrier_sense_violations = 0;
  std::uint64_t events = 0;
  double window_s = 0.0;
};

/// One infrastructure BSS carrying the configured voice sessions: the AP is
/// station 0, session i runs from station 2i+1 to station 2i+2.
class VoiceBss
{
public:
  static StationId source_of (int session) { return static_cast<StationId> (2 * session + 1); }
  static StationId destination_of (int session) { return static_cast<StationId> (2 * session + 2); }

  VoiceBss (const ScenarioConfig &cfg, std::uint64_t seed)
    : m_cfg (cfg), m_seed (seed), m_codec (cfg.codec ()), m_sdu_bytes (m_codec.sdu_bytes ()),
      m_net (m_sched, cfg.mac, build_loss (cfg), seed),
      m_status (cfg.classifier, cfg.estimator), m_bda (cfg.mac.short_retry),
      m_collector (static_cast<std::size_t> (cfg.n_sessions), SimTime::from_seconds (cfg.warmup_s)),
      m_end (SimTime::from_seconds (cfg.duration_s))
  {
    cfg.validate ();
    const bool pap = cfg.algorithm == Algorithm::Pap;
    OneXParams onex;
    onex.good_step_tenths = cfg.z_good_step;
    m_net.add_station (StationRole::AccessPoint, pap ? BackoffKind::OneX : BackoffKind::Beb, onex);
    for (int i = 0; i < cfg.n_sessions; ++i)
      {
        VoiceSession s;
        s.id = i;
        s.src = m_net.add_station (StationRole::Terminal).id ();
        s.dst = m_net.add_station (StationRole::Terminal).id ();
        s.on_mean_s = cfg.on_mean_s;
        s.off_mean_s = cfg.off_mean_s;
        s.activity = cfg.on_mean_s / (cfg.on_mean_s + cfg.off_mean_s);
        s.lossy = i < cfg.bad_sessions;
        s.flr = s.lossy ? cfg.flr : 0.0;
        m_status.configure (s.dst, s.lossy ? ChannelStatus::Bad : ChannelStatus::Good);
        m_flow_of_source[s.src] = s.dst;
        m_sessions.push_back (s);
        m_sources.emplace_back (m_codec, s, make_stream (seed, "traffic", {static_cast<std::uint64_t> (i)}));
      }
    wire_access_point (pap);
    for (const auto &s : m_sessions)
      {
        m_net.station (s.dst).hooks ().deliver_up
          = [this] (const Frame &f, SimTime at) { on_final_delivery (f, at); };
      }
    m_net.add_trace_sink ([this] (const TraceRecord &r) { on_trace (r); });
  }

  DcfNetwork &network () { return m_net; }
  Scheduler &scheduler () { return m_sched; }
  const BdaState &bda () const { return m_bda; }
  const ChannelStatusMap &channel_status () const { return m_status; }
  const std::vector<VoiceSession> &sessions () const { return m_sessions; }

  void run ()
  {
    for (std::size_t i = 0; i < m_sources.size (); ++i)
      {
        m_sources[i].start (SimTime ());
        pump (i);
      }
    m_sched.run_until (m_end);
  }

  ReplicationResult result () const
  {
    ReplicationResult r;
    r.seed = m_seed;
    r.flows = m_collector.flows ();
    r.resident = resident_sdus ();
    for (const auto &s : m_sessions)
      r.lossy.push_back (s.lossy);
    r.ap_head_good = m_head_good;
    r.ap_head_bad = m_head_bad;
    r.ap_successes = m_net.station (kAccessPointId).counters ().successes;
    r.uplink_drops = m_uplink_drops;
    r.uplink_drops_blocked = m_uplink_drops_blocked;
    r.uplink_drops_after_block = m_uplink_drops_after_block;
    r.bda_peak_streak = m_bda.peak_streak ();
    r.bda_blocked = m_bda.blocked_total ();
    r.carrier_sense_violations = m_net.carrier_sense_violations ();
    r.events = m_sched.total_fired ();
    r.window_s = m_cfg.duration_s - m_cfg.warmup_s;
    return r;
  }

private:
  static LossModel build_loss (const ScenarioConfig &cfg)
  {
    LossModel loss;
    for (int i = 0; i < cfg.bad_sessions; ++i)
      loss.set_flr (destination_of (i), cfg.flr);
    return loss;
  }

  void wire_access_point (bool pap)
  {
    StationHooks &h = m_net.station (kAccessPointId).hooks ();
    h.deliver_up = [this] (const Frame &f, SimTime) {
      Frame relay = f;
      relay.dst = m_sessions.at (f.session).dst;
      m_net.station (kAccessPointId).enqueue_sdu (relay);
    };
    h.channel_status = [this] (StationId dst) { return m_status.status (dst); };
    h.attempt_outcome = [this] (const Frame &f, DeliveryOutcome o) { m_status.classify_update (f.dst, o); };
    if (!pap)
      return;
    h.ack_decision = [this] (const Frame &f) {
      auto it = m_flow_of_source.find (f.src);
      const ChannelStatus st = it == m_flow_of_source.end () ? ChannelStatus::Good : m_status.status (it->second);
      return m_bda.on_uplink_data (f.src, st, f.retry_count);
    };
    h.head_resolved = [this] (const Frame &, bool) { m_bda.on_ap_transmit (); };
  }

  void pump (std::size_t i)
  {
    const VoiceEvent ev = m_sources[i].next_event ();
    if (ev.at >= m_end)
      return;
    m_sched.schedule (ev.at, [this, i, ev] {
      if (ev.kind == VoiceEventKind::EmitFrame)
        emit_sdu (static_cast<int> (i));
      m_sources[i].advance ();
      pump (i);
    });
  }

  void emit_sdu (int session)
  {
    const VoiceSession &s = m_sessions[session];
    Frame f;
    f.dst = kAccessPointId;
    f.session = session;
    f.sdu_seq = m_next_sdu[session]++;
    f.sdu_bytes = m_sdu_bytes;
    f.born_at = m_sched.now ();
    m_collector.on_generated (f);
    m_net.station (s.src).enqueue_sdu (f);
  }

  void on_final_delivery (const Frame &f, SimTime at)
  {
    if (f.session < 0)
      return;
    auto &marks = m_delivered[f.session];
    if (marks.size () <= f.sdu_seq)
      marks.resize (f.sdu_seq + 1, 0);
    marks[f.sdu_seq] = 1;
    m_collector.on_final_delivery (f, at);
  }

  void on_trace (const TraceRecord &r)
  {
    m_collector.on_trace (r);
    if (r.kind == TraceKind::Blocked)
      m_last_blocked[r.frame.src] = {r.frame.seq, r.frame.retry_count};
    if (r.station == kAccessPointId && (r.kind == TraceKind::HeadDone || r.kind == TraceKind::Drop)
        && r.frame.born_at >= m_collector.warmup ())
      {
        HeadServiceStats &hs = m_sessions.at (r.frame.session).lossy ? m_head_bad : m_head_good;
        hs.sum += r.at - r.head_since;
        ++hs.count;
      }
    if (r.kind == TraceKind::Drop && r.station != kAccessPointId)
      {
        ++m_uplink_drops;
        auto it = m_last_blocked.find (r.station);
        if (it != m_last_blocked.end () && it->second.first == r.frame.seq)
          ++(it->second.second == r.frame.retry_count ? m_uplink_drops_blocked : m_uplink_drops_after_block);
      }
  }

  std::vector<std::int64_t> resident_sdus () const
  {
    std::vector<std::int64_t> count (m_sessions.size (), 0);
    std::vector<std::vector<char>> seen (m_sessions.size ());
    const SimTime warm = m_collector.warmup ();
    for (std::size_t sid = 0; sid < m_net.station_count (); ++sid)
      for (const Frame &f : m_net.station (static_cast<StationId> (sid)).queue ())
        {
          if (f.session < 0 || f.born_at < warm)
            continue;
          auto dit = m_delivered.find (f.session);
          if (dit != m_delivered.end () && f.sdu_seq < dit->second.size () && dit->second[f.sdu_seq])
            continue;
          auto &marks = seen[f.session];
          if (marks.size () <= f.sdu_seq)
            marks.resize (f.sdu_seq + 1, 0);
          if (!marks[f.sdu_seq])
            {
              marks[f.sdu_seq] = 1;
              ++count[f.session];
            }
        }
    return count;
  }

  ScenarioConfig m_cfg;
  std::uint64_t m_seed;
  VoiceCodec m_codec;
  int m_sdu_bytes;
  Scheduler m_sched;
  DcfNetwork m_net;
  ChannelStatusMap m_status;
  BdaState m_bda;
  FlowCollector m_collector;
  SimTime m_end;
  std::vector<VoiceSession> m_sessions;
  std::vector<OnOffVoiceSource> m_sources;
  std::map<int, std::uint32_t> m_next_sdu;
  std::map<int, std::vector<char>> m_delivered;
  std::unordered_map<StationId, StationId> m_flow_of_source;
  std::unordered_map<StationId, std::pair<std::uint32_t, int>> m_last_blocked; // seq, retry_count
  HeadServiceStats m_head_good;
  HeadServiceStats m_head_bad;
  std::uint64_t m_uplink_drops = 0;
  std::uint64_t m_uplink_drops_blocked = 0;
  std::uint64_t m_uplink_drops_after_block = 0;
};

inline ReplicationResult
run_replication (const ScenarioConfig &cfg, std::uint64_t seed)
{
  VoiceBss bss (cfg, seed);
  bss.run ();
  return bss.result ();
}

// ----------------------------------------------------------------------------

struct ResultRow
{
  std::string scenario;
  std::string algorithm;
  std::int64_t seed = 0; // -1 marks the cross-replication mean
  double fi_s = 0.0;
  int n_sessions = 0;
  int n_bad = 0;
  double flr = 0.0;
  int session_id = -1; // -1 on group rows
  std::string group;   // good | bad | aggregate
  double throughput_bps = 0.0;
  double mean_delay_s = 0.0;
  double loss_ratio = 0.0;
  double mos = 1.0;
};

inline constexpr std::string_view kCsvHeader
  = "scenario,algorithm,seed,fi_s,n_sessions,n_bad,flr,session_id,group,throughput_bps,mean_delay_s,loss_ratio,mos";

struct ScenarioResult
{
  ScenarioConfig config;
  std::vector<ReplicationResult> replications;
  std::vector<ResultRow> rows;

  /// Cross-replication mean row of `group` (session_id -1).
  const ResultRow *mean_row (std::string_view group) const
  {
    for (const auto &r : rows)
      if (r.seed == -1 && r.session_id == -1 && r.group == group)
        return &r;
    return nullptr;
  }
};

namespace detail {

inline ResultRow
metrics_row (const ScenarioConfig &c, std::int64_t seed, int session, std::string group, const FlowStats &f, double window_s)
{
  ResultRow row;
  row.scenario = c.name;
  row.algorithm = to_string (c.algorithm);
  row.seed = seed;
  row.fi_s = c.fi_s;
  row.n_sessions = c.n_sessions;
  row.n_bad = c.bad_sessions;
  row.flr = c.flr;
  row.session_id = session;
  row.group = std::move (group);
  row.throughput_bps = throughput (f, window_s);
  row.mean_delay_s = mean_delay_s (f);
  row.loss_ratio = f.sdus_generated > 0 ? loss_ratio (f) : 0.0;
  row.mos = std::isnan (row.mean_delay_s) ? 1.0 : mos (row.mean_delay_s, row.loss_ratio).mos;
  return row;
}

} // namespace detail

/// Rows of one replication: per-session rows, then good/bad/aggregate.
inline std::vector<ResultRow>
replication_rows (const ScenarioConfig &c, const ReplicationResult &r)
{
  std::vector<ResultRow> rows;
  FlowStats good, bad, all;
  bool any_good = false, any_bad = false;
  for (std::size_t i = 0; i < r.flows.size (); ++i)
    {
      const bool lossy = r.lossy[i];
      rows.push_back (detail::metrics_row (c, static_cast<std::int64_t> (r.seed), static_cast<int> (i),
                                           lossy ? "bad" : "good", r.flows[i], r.window_s));
      (lossy ? bad : good) += r.flows[i];
      (lossy ? any_bad : any_good) = true;
      all += r.flows[i];
    }
  const auto seed = static_cast<std::int64_t> (r.seed);
  if (any_good)
    rows.push_back (detail::metrics_row (c, seed, -1, "good", good, r.window_s));
  if (any_bad)
    rows.push_back (detail::metrics_row (c, seed, -1, "bad", bad, r.window_s));
  rows.push_back (detail::metrics_row (c, seed, -1, "aggregate", all, r.window_s));
  return rows;
}

/// Element-wise mean of equally shaped per-replication row blocks.
inline std::vector<ResultRow>
mean_rows (const std::vector<std::vector<ResultRow>> &blocks)
{
  std::vector<ResultRow> out;
  if (blocks.empty ())
    return out;
  const std::size_t n = blocks.front ().size ();
  for (std::size_t k = 0; k < n; ++k)
    {
      ResultRow m = blocks.front ()[k];
      m.seed = -1;
      double tp = 0, loss = 0, mos_sum = 0, delay = 0;
      int delay_n = 0;
      for (const auto &b : blocks)
        {
          tp += b[k].throughput_bps;
          loss += b[k].loss_ratio;
          mos_sum += b[k].mos;
          if (!std::isnan (b[k].mean_delay_s))
            {
              delay += b[k].mean_delay_s;
              ++delay_n;
            }
        }
      const double reps = static_cast<double> (blocks.size ());
      m.throughput_bps = tp / reps;
      m.loss_ratio = loss / reps;
      m.mos = mos_sum / reps;
      m.mean_delay_s = delay_n ? delay / delay_n : std::numeric_limits<double>::quiet_NaN ();
      out.push_back (m);
    }
  return out;
}

/// Runs `replications` seeds (seed, seed+1, ...) of one scenario point.
inline ScenarioResult
run_scenario (const ScenarioConfig &c)
{
  c.validate ();
  ScenarioResult res;
  res.config = c;
  std::vector<std::vector<ResultRow>> blocks;
  for (int k = 0; k < c.replications; ++k)
    {
      res.replications.push_back (run_replication (c, c.seed + static_cast<std::uint64_t> (k)));
      blocks.push_back (replication_rows (c, res.replications.back ()));
      res.rows.insert (res.rows.end (), blocks.back ().begin (), blocks.back ().end ());
    }
  const auto means = mean_rows (blocks);
  res.rows.insert (res.rows.end (), means.begin (), means.end ());
  return res;
}

enum class SweepKey { Sessions, BadSessions };

inline SweepKey
parse_sweep_key (std::string_view key)
{
  if (key == "n_sessions")
    return SweepKey::Sessions;
  if (key == "bad_sessions")
    return SweepKey::BadSessions;
  throw ConfigError (ConfigError::Kind::UnknownKey, std::string (key), "sweepable keys: n_sessions, bad_sessions");
}

inline std::vector<ScenarioResult>
sweep (const ScenarioConfig &tmpl, SweepKey key, int from, int to)
{
  if (from > to)
    throw ConfigError (ConfigError::Kind::OutOfRange, "range", "empty sweep range");
  std::vector<ScenarioResult> out;
  for (int v = from; v <= to; ++v)
    {
      ScenarioConfig c = tmpl;
      (key == SweepKey::Sessions ? c.n_sessions : c.bad_sessions) = v;
      out.push_back (run_scenario (c));
    }
  return out;
}

inline std::string
format_g6 (double v)
{
  char buf[64];
  std::snprintf (buf, sizeof buf, "%.6g", v);
  return buf;
}

inline void
write_csv (std::ostream &os, const std::vector<ResultRow> &rows, bool header = true)
{
  if (header)
    os << kCsvHeader << '\n';
  for (const auto &r : rows)
    os << r.scenario << ',' << r.algorithm << ',' << r.seed << ',' << format_g6 (r.fi_s) << ',' << r.n_sessions << ','
       << r.n_bad << ',' << format_g6 (r.flr) << ',' << r.session_id << ',' << r.group << ','
       << format_g6 (r.throughput_bps) << ',' << format_g6 (r.mean_delay_s) << ',' << format_g6 (r.loss_ratio) << ','
       << format_g6 (r.mos) << '\n';
}

inline std::string
to_csv (const std::vector<ResultRow> &rows)
{
  std::ostringstream os;
  write_csv (os, rows);
  return os.str ();
}

} // namespace papsim
