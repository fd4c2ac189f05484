#include "ripple/result_io.hpp"

#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace ripple {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json config_json(const RunConfig& c) {
  ordered_json j;
  j["k"] = c.k;
  j["epsilon"] = c.epsilon;
  j["n1"] = c.n1;
  j["reservoir_capacity"] = c.reservoir_capacity;
  j["min_tours"] = c.min_tours;
  j["max_tours"] = c.max_tours;
  j["max_steps"] = c.max_steps;
  j["rejection_cap"] = c.rejection_cap;
  j["workers"] = c.workers;
  j["rng_seed"] = c.rng_seed;
  j["batch"] = c.effective_batch();
  return j;
}

ordered_json pattern_row(const PatternKey& key, double value, const char* value_name) {
  ordered_json row;
  row["pattern"] = key.hex();
  row["order"] = key.order();
  row["edges"] = key.num_edges();
  row["density"] = key.density();
  row["is_star"] = key.is_star();
  row[value_name] = value;
  return row;
}

ordered_json counts_json(const CountVector& counts, const char* value_name) {
  ordered_json arr = ordered_json::array();
  for (const auto& [key, val] : counts) arr.push_back(pattern_row(key, val, value_name));
  return arr;
}

ordered_json stratum_json(const StratumResult& s) {
  ordered_json j;
  j["r"] = s.r;
  j["skipped"] = s.skipped;
  j["deg_hat"] = s.deg_hat;
  j["tours"] = s.tours;
  j["aborted"] = s.aborted;
  // Scaled per-pattern contribution of this stratum; stratum 1 is exact.
  double scale = s.r == 1 ? 1.0 : (s.tours ? s.deg_hat / (2.0 * double(s.tours)) : 0.0);
  ordered_json mu = ordered_json::object();
  for (const auto& [key, val] : s.reward_sum) mu[key.hex()] = val * scale;
  j["mu"] = mu;
  j["edge_estimate"] = s.edge_estimate;
  j["edge_variance"] = s.edge_variance;
  j["mean_tour_len"] = s.mean_tour_len;
  j["max_tour_len"] = s.max_tour_len;
  j["reservoir_pressure"] = s.reservoir_pressure;
  j["total_steps"] = s.total_steps;
  return j;
}

}  // namespace

std::string result_to_json(const RippleResult& r) {
  ordered_json j;
  j["mode"] = "estimate";
  j["config"] = config_json(r.config);
  j["total"] = r.total;
  j["counts"] = counts_json(r.counts, "estimate");
  ordered_json strata = ordered_json::array();
  for (const auto& s : r.strata) strata.push_back(stratum_json(s));
  j["strata"] = strata;
  j["strata_used"] = r.strata_used;
  j["total_steps"] = r.total_steps;
  j["warnings"] = r.warnings;
  return j.dump(2) + "\n";
}

namespace {

std::string csv_from(const CountVector& counts, const char* value_name) {
  std::ostringstream out;
  out << "pattern,order,edges,density,is_star," << value_name << "\n";
  out << std::setprecision(17);
  for (const auto& [key, val] : counts) {
    out << key.hex() << ',' << key.order() << ',' << key.num_edges() << ',' << key.density()
        << ',' << (key.is_star() ? 1 : 0) << ',' << val << "\n";
  }
  return out.str();
}

}  // namespace

std::string result_to_csv(const RippleResult& r) { return csv_from(r.counts, "estimate"); }

std::string exact_to_json(const ExactCounts& e, int k) {
  ordered_json j;
  j["mode"] = "exact";
  j["config"] = ordered_json{{"k", k}};
  j["total"] = e.total;
  ordered_json arr = ordered_json::array();
  for (const auto& [key, val] : e.counts) {
    ordered_json row = pattern_row(key, double(val), "estimate");
    row["count"] = val;
    arr.push_back(row);
  }
  j["counts"] = arr;
  j["strata"] = ordered_json::array();
  j["strata_used"] = 0;
  j["total_steps"] = 0;
  j["warnings"] = ordered_json::array();
  return j.dump(2) + "\n";
}

std::string exact_to_csv(const ExactCounts& e) {
  CountVector v;
  for (const auto& [key, val] : e.counts) v[key] = double(val);
  return csv_from(v, "count");
}

std::string human_summary(const RippleResult& r) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out << "total: " << std::setprecision(6) << r.total << " connected induced " << r.config.k
      << "-node subgraphs (" << r.counts.size() << " patterns)\n";
  out << "strata used: " << r.strata_used << ", total steps: " << r.total_steps << ", wall: "
      << std::setprecision(3) << r.wall_time_s << "s\n";
  for (const auto& s : r.strata) {
    out << "  stratum " << s.r << ": ";
    if (s.r == 1) {
      out << "exact, " << std::setprecision(0) << s.edge_estimate << " seed-incident edges\n";
      continue;
    }
    if (s.skipped) {
      out << "skipped (no inbound crossings)\n";
      continue;
    }
    out << "deg_hat=" << std::setprecision(3) << s.deg_hat << " tours=" << s.tours
        << " edge_est=" << s.edge_estimate << " mean_len=" << s.mean_tour_len
        << " pressure=" << s.reservoir_pressure;
    if (s.aborted) out << " aborted=" << s.aborted;
    out << "\n";
  }
  for (const auto& w : r.warnings) out << "warning: " << w << "\n";
  return out.str();
}

}  // namespace ripple
