#include "taxorl/features.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace taxorl {

namespace {

bool starts_upper(const std::string& s) {
  return !s.empty() && std::isupper(static_cast<unsigned char>(s[0]));
}

// Longest common substring length (character level).
int lcs_substring(const std::string& a, const std::string& b) {
  if (a.empty() || b.empty()) return 0;
  std::vector<int> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  int best = 0;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = (a[i - 1] == b[j - 1]) ? prev[j - 1] + 1 : 0;
      best = std::max(best, cur[j]);
    }
    std::swap(prev, cur);
  }
  return best;
}

std::string normalize(const std::string& s) {
  auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  auto b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

}  // namespace

SurfaceFeatures surface_features(const std::string& raw_x,
                                 const std::string& raw_y) {
  std::string x = normalize(raw_x), y = normalize(raw_y);
  SurfaceFeatures f;
  f.cap_x = starts_upper(x);
  f.cap_y = starts_upper(y);

  auto xt = split_tokens(x);
  auto yt = split_tokens(y);
  f.length_diff = static_cast<int>(xt.size()) - static_cast<int>(yt.size());

  if (!yt.empty() && yt.size() <= xt.size()) {
    f.ends_with = std::equal(yt.rbegin(), yt.rend(), xt.rbegin());
    for (std::size_t i = 0; i + yt.size() <= xt.size() && !f.contains; ++i)
      f.contains = std::equal(yt.begin(), yt.end(), xt.begin() + i);
  }

  int k = 0;
  while (k < kSuffixMatchCap && k < static_cast<int>(x.size()) &&
         k < static_cast<int>(y.size()) &&
         x[x.size() - 1 - k] == y[y.size() - 1 - k])
    ++k;
  f.suffix_match = k;

  std::size_t mx = std::max(x.size(), y.size());
  f.lcs_ratio = mx == 0 ? 0.0 : double(lcs_substring(x, y)) / double(mx);
  return f;
}

double freq_diff(const std::string& x, const std::string& y,
                 const CandidateTable& table) {
  auto freq_n = [&](const std::string& a, const std::string& b) {
    long long mx = table.max_freq_for_hypo(a);
    if (mx == 0) return 0.0;
    return double(table.freq(a, b)) / double(mx);
  };
  return freq_n(x, y) - freq_n(y, x);
}

double generality_diff(const std::string& x, const std::string& y,
                       const CandidateTable& table) {
  auto g = [&](const std::string& t) {
    return std::log1p(static_cast<double>(table.distinct_hyponyms(t)));
  };
  return g(y) - g(x);
}

void FeatureBinner::fit(
    const std::vector<std::vector<double>>& samples_per_feature, int bins) {
  if (static_cast<int>(samples_per_feature.size()) != N_SCALARS)
    throw std::invalid_argument("FeatureBinner::fit: expected " +
                                std::to_string(int(N_SCALARS)) +
                                " sample vectors");
  bins_ = bins;
  boundaries_.assign(N_SCALARS, {});
  for (int f = 0; f < N_SCALARS; ++f) {
    std::vector<double> xs = samples_per_feature[f];
    std::sort(xs.begin(), xs.end());
    std::vector<double>& cuts = boundaries_[f];
    if (xs.empty()) {
      // Degenerate fit: evenly spaced unit cuts keep the lookup total.
      for (int b = 1; b < bins; ++b) cuts.push_back(static_cast<double>(b));
      continue;
    }
    for (int b = 1; b < bins; ++b) {
      std::size_t idx = (xs.size() * static_cast<std::size_t>(b)) / bins;
      if (idx >= xs.size()) idx = xs.size() - 1;
      double c = xs[idx];
      // Boundaries must be non-decreasing; duplicates just leave bins empty.
      if (!cuts.empty() && c < cuts.back()) c = cuts.back();
      cuts.push_back(c);
    }
  }
}

int FeatureBinner::bin(Scalar feature, double value) const {
  if (!fitted())
    throw std::logic_error("FeatureBinner: bin() before fit()");
  const auto& cuts = boundaries_[feature];
  int b = 0;
  while (b < static_cast<int>(cuts.size()) && value >= cuts[b]) ++b;
  return b;  // in [0, bins-1]
}

void FeatureBinner::restore(std::vector<std::vector<double>> boundaries,
                            int bins) {
  if (static_cast<int>(boundaries.size()) != N_SCALARS)
    throw std::invalid_argument("FeatureBinner::restore: bad boundary count");
  boundaries_ = std::move(boundaries);
  bins_ = bins;
}

FeatureBins compute_feature_bins(const std::string& x, const std::string& y,
                                 const CandidateTable& table,
                                 const FeatureBinner& binner, bool use_surface,
                                 bool use_fg) {
  FeatureBins out;
  if (use_surface) {
    SurfaceFeatures sf = surface_features(x, y);
    out.surface = {sf.cap_x ? 1 : 0,
                   sf.cap_y ? 1 : 0,
                   sf.ends_with ? 1 : 0,
                   sf.contains ? 1 : 0,
                   binner.bin(FeatureBinner::SUFFIX_MATCH, sf.suffix_match),
                   binner.bin(FeatureBinner::LCS_RATIO, sf.lcs_ratio),
                   binner.bin(FeatureBinner::LENGTH_DIFF, sf.length_diff)};
  }
  if (use_fg) {
    out.fg = {binner.bin(FeatureBinner::FREQ_DIFF, freq_diff(x, y, table)),
              binner.bin(FeatureBinner::GENERALITY_DIFF,
                         generality_diff(x, y, table))};
  }
  return out;
}

}  // namespace taxorl
