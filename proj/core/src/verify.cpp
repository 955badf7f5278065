// Copyright 2026 The slicesim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "slicesim/simulation.hpp"

namespace slicesim {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

bool read_lines(const std::string& path, std::vector<std::string>* out) {
  std::ifstream in(path);
  if (!in) return false;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) out->push_back(line);
  }
  return true;
}

Snssai parse_snssai(const std::string& sst, const std::string& sd) {
  Snssai id;
  id.sst = static_cast<std::uint8_t>(std::stoul(sst));
  if (!sd.empty()) id.sd = static_cast<std::uint32_t>(std::stoul(sd));
  return id;
}

}  // namespace

std::vector<std::string> verify_run(const std::string& out_dir) {
  std::vector<std::string> failures;
  fs::path dir(out_dir);

  json report;
  {
    std::ifstream in(dir / "report.json");
    if (!in) return {"missing report.json"};
    try {
      in >> report;
    } catch (const json::exception& e) {
      return {std::string("unreadable report.json: ") + e.what()};
    }
  }
  Scenario sc;
  {
    std::ifstream in(dir / "scenario.normalized.json");
    if (!in) return {"missing scenario.normalized.json"};
    std::stringstream ss;
    ss << in.rdbuf();
    try {
      sc = parse_scenario_text(ss.str());
    } catch (const SimError& e) {
      return {std::string("unreadable scenario.normalized.json: ") + e.what()};
    }
  }

  for (const char* key :
       {"conservation_violations", "cap_violations", "guarantee_violations"}) {
    if (!report.contains(key) || !report[key].is_number_unsigned()) {
      failures.push_back(std::string("report.json: missing counter ") + key);
    } else if (report[key].get<std::uint64_t>() != 0) {
      failures.push_back(std::string("report.json: nonzero ") + key + " (" +
                         report[key].dump() + ")");
    }
  }

  const unsigned total_prbs = sc.numerology.total_prbs;
  const double period_s = static_cast<double>(sc.report_period_ms) / 1000.0;

  // Reconstruct each slice's max-ratio timeline from the initial config,
  // scheduled policy events, and acknowledged control messages.
  std::map<Snssai, std::vector<std::pair<std::uint64_t, int>>> max_timeline;
  for (const auto& s : sc.slices)
    max_timeline[s.snssai].push_back({0, s.policy.max_pct});
  for (const auto& ev : sc.timeline)
    if (ev.action == TimedEvent::Action::kSetPolicy)
      max_timeline[ev.snssai].push_back(
          {static_cast<std::uint64_t>(std::llround(ev.t_s * 1000.0)),
           ev.policy.max_pct});
  {
    std::vector<std::string> lines;
    if (!read_lines((dir / "control_log.csv").string(), &lines))
      return {"missing control_log.csv"};
    for (std::size_t i = 1; i < lines.size(); ++i) {
      auto f = split_csv(lines[i]);
      if (f.size() != 7) {
        failures.push_back("control_log.csv: bad row " + lines[i]);
        continue;
      }
      if (f[6] != "ack") continue;
      Snssai id = parse_snssai(f[1], f[2]);
      if (!max_timeline.count(id)) {
        failures.push_back("control_log.csv: unknown slice " + id.to_string());
        continue;
      }
      max_timeline[id].push_back({std::stoull(f[0]), std::stoi(f[5])});
    }
  }
  for (auto& [id, tl] : max_timeline)
    std::stable_sort(tl.begin(), tl.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });

  // The reconstructed timeline is coarse: a control acknowledged at T may
  // take effect up to one report period later, so a frame is only flagged
  // when it exceeds every cap plausibly active around it.
  const std::uint64_t slack_ms = sc.report_period_ms;
  auto allowed_cap = [&](const Snssai& id, std::uint64_t frame_ms) {
    const auto& tl = max_timeline.at(id);
    double best = 0.0;
    std::uint64_t lo = frame_ms > slack_ms ? frame_ms - slack_ms : 0;
    std::uint64_t hi = frame_ms + 10 + slack_ms;
    for (std::size_t i = 0; i < tl.size(); ++i) {
      std::uint64_t start = tl[i].first;
      std::uint64_t end = i + 1 < tl.size() ? tl[i + 1].first : ~0ull;
      if (start < hi && end > lo) {
        double cap = std::floor(static_cast<double>(tl[i].second) *
                                total_prbs / 100.0);
        best = std::max(best, cap);
      }
    }
    return best;
  };

  {
    std::vector<std::string> lines;
    if (!read_lines((dir / "prbs.csv").string(), &lines))
      return {"missing prbs.csv"};
    if (lines.empty() || lines[0] != "frame_ms,sst,sd,mean_prbs")
      failures.push_back("prbs.csv: bad header");
    std::map<std::uint64_t, double> frame_sum;
    std::uint64_t cap_failures = 0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
      auto f = split_csv(lines[i]);
      if (f.size() != 4) {
        failures.push_back("prbs.csv: bad row " + lines[i]);
        continue;
      }
      std::uint64_t frame_ms = std::stoull(f[0]);
      Snssai id = parse_snssai(f[1], f[2]);
      double mean = std::stod(f[3]);
      frame_sum[frame_ms] += mean;
      if (!max_timeline.count(id)) {
        failures.push_back("prbs.csv: unknown slice " + id.to_string());
        continue;
      }
      if (mean > allowed_cap(id, frame_ms) + 1e-6) ++cap_failures;
    }
    if (cap_failures)
      failures.push_back("prbs.csv: " + std::to_string(cap_failures) +
                         " frame(s) above the slice max-ratio cap");
    std::uint64_t over = 0;
    for (const auto& [t, sum] : frame_sum)
      if (sum > static_cast<double>(total_prbs) + 1e-6) ++over;
    if (over)
      failures.push_back("prbs.csv: " + std::to_string(over) +
                         " frame(s) above the cell PRB total");
  }

  {
    std::vector<std::string> lines;
    if (!read_lines((dir / "throughput.csv").string(), &lines))
      return {"missing throughput.csv"};
    if (lines.empty() || lines[0] != "t_ms,ue_id,pdu_id,sst,sd,bps")
      failures.push_back("throughput.csv: bad header");
    double delivered_bytes = 0.0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
      auto f = split_csv(lines[i]);
      if (f.size() != 6) {
        failures.push_back("throughput.csv: bad row " + lines[i]);
        continue;
      }
      delivered_bytes += std::stod(f[5]) * period_s / 8.0;
    }
    if (report.contains("total_delivered_bytes")) {
      auto expect =
          static_cast<double>(report["total_delivered_bytes"].get<std::uint64_t>());
      double tol = std::max(1.0, expect * 1e-3);
      if (std::abs(delivered_bytes - expect) > tol)
        failures.push_back(
            "throughput.csv totals disagree with report.json: " +
            std::to_string(delivered_bytes) + " vs " + std::to_string(expect));
    }
  }

  return failures;
}

}  // namespace slicesim
