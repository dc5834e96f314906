#include "findex/demo.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "findex/csv.hpp"
#include "findex/dates.hpp"
#include "findex/errors.hpp"
#include "findex/mfdfa.hpp"
#include "findex/rng.hpp"

namespace findex {

namespace {

constexpr int kRegions = 4;
constexpr int kPerRegion = 5;
constexpr int kMarkets = kRegions * kPerRegion;
constexpr int kDays = 3091;  // trading days of the raw calendar

const char* kRegionName[kRegions] = {"ASIA", "EURO", "AMER", "MEAF"};

}  // namespace

std::vector<std::string> demo_labels() {
  std::vector<std::string> labels;
  labels.reserve(kMarkets);
  for (int r = 0; r < kRegions; ++r)
    for (int i = 1; i <= kPerRegion; ++i)
      labels.push_back(std::string(kRegionName[r]) + std::to_string(i));
  return labels;
}

std::vector<std::string> demo_regions() {
  std::vector<std::string> regions;
  regions.reserve(kMarkets);
  for (int r = 0; r < kRegions; ++r)
    for (int i = 0; i < kPerRegion; ++i)
      regions.emplace_back(kRegionName[r]);
  return regions;
}

void generate_demo_panel(const std::string& csv_path, uint64_t seed) {
  const std::vector<std::string> labels = demo_labels();

  // Raw trading calendar: consecutive weekdays starting 1997-07-02.
  std::vector<Date> dates;
  dates.reserve(kDays);
  Date d = Date::parse("1997-07-02");
  while (static_cast<int>(dates.size()) < kDays) {
    int wd = d.weekday();
    if (wd >= 1 && wd <= 5) dates.push_back(d);
    d = d + 1;
  }

  Rng rng(seed);

  // One cascade envelope, phase-shifted per index so the two modulated
  // indices inside a region do not share identical volatility paths.
  // Exponent 0.25 keeps the multiplier's dynamic range moderate; normalising
  // by the mean keeps the average volatility comparable to the flat indices.
  const std::vector<double> envelope = bmfm_generate(0.75, 12);  // 4096 values
  const int env_len = static_cast<int>(envelope.size());
  std::vector<double> w(envelope.size());
  double env_mean = 0.0;
  for (size_t t = 0; t < envelope.size(); ++t) {
    w[t] = std::pow(envelope[t], 0.25);
    env_mean += w[t];
  }
  env_mean /= static_cast<double>(env_len);
  for (double& x : w) x /= env_mean;

  // Factor model for daily log-ish returns (small enough that the price stays
  // positive): common global factor, regional factor, idiosyncratic noise.
  std::vector<std::vector<double>> R(kMarkets,
                                     std::vector<double>(kDays - 1, 0.0));
  for (int t = 0; t < kDays - 1; ++t) {
    double g = rng.gaussian();
    double f[kRegions];
    for (int r = 0; r < kRegions; ++r) f[r] = rng.gaussian();
    for (int m = 0; m < kMarkets; ++m) {
      int r = m / kPerRegion;
      int i = m % kPerRegion;
      double eps = rng.gaussian();
      double ret = 0.01 * (0.5 * g + 0.7 * f[r] + 0.7 * eps);
      // Indices 1 and 3 of each region carry the cascade envelope with a
      // per-market cyclic shift, giving them genuine multifractal volatility.
      if (i == 0 || i == 2) {
        int shift = 137 * m;
        ret *= w[static_cast<size_t>((t + shift) % env_len)];
      }
      R[m][t] = ret;
    }
  }

  // Prices via simple-return compounding from staggered initial levels.
  std::vector<std::vector<double>> S(kMarkets, std::vector<double>(kDays, 0.0));
  for (int m = 0; m < kMarkets; ++m) {
    S[m][0] = 50.0 + 10.0 * m;
    for (int t = 1; t < kDays; ++t)
      S[m][t] = S[m][t - 1] * (1.0 + R[m][t - 1]);
  }

  // Closures. closed[m][t] marks a blank cell in the CSV.
  std::vector<std::vector<uint8_t>> closed(
      kMarkets, std::vector<uint8_t>(kDays, 0));
  // Two broad holidays: 7 of 20 markets closed (35% > removal threshold), so
  // the alignment stage should drop these dates outright.
  for (int t : {500, 1500})
    for (int m = 0; m <= 6; ++m) closed[static_cast<size_t>(m)][static_cast<size_t>(t)] = 1;
  // Ten scattered partial closures: 3 of 20 markets (15%), below threshold,
  // so these cells get carried forward instead.
  for (int k = 0; k < 10; ++k) {
    int t = 650 + 120 * k;
    for (int m : {k % kMarkets, (k + 7) % kMarkets, (k + 13) % kMarkets})
      closed[static_cast<size_t>(m)][static_cast<size_t>(t)] = 1;
  }

  std::ofstream out(csv_path, std::ios::binary);
  if (!out) throw input_error("cannot open for writing: " + csv_path);
  out << "date";
  for (const auto& lab : labels) out << ',' << lab;
  out << '\n';
  for (int t = 0; t < kDays; ++t) {
    out << dates[static_cast<size_t>(t)].to_string();
    for (int m = 0; m < kMarkets; ++m) {
      out << ',';
      if (!closed[static_cast<size_t>(m)][static_cast<size_t>(t)])
        out << format_double(S[static_cast<size_t>(m)][static_cast<size_t>(t)]);
    }
    out << '\n';
  }
  if (!out.good()) throw input_error("write failed: " + csv_path);
}

}  // namespace findex
