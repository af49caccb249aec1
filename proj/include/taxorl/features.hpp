#ifndef TAXORL_FEATURES_HPP
#define TAXORL_FEATURES_HPP

#include <string>
#include <vector>

#include "taxorl/data_io.hpp"

namespace taxorl {

inline constexpr int kSuffixMatchCap = 7;

struct SurfaceFeatures {
  bool cap_x = false, cap_y = false;
  bool ends_with = false;   // x's tokens end with y's tokens
  bool contains = false;    // y's tokens are a contiguous subsequence of x's
  int suffix_match = 0;     // trailing character matches, capped
  double lcs_ratio = 0.0;   // longest common substring / max surface length
  int length_diff = 0;      // token count x minus token count y
};

// Pure function of the two surfaces; total on empty strings (all-false/zero)
// so the RE-mode virtual root can be featurized.
SurfaceFeatures surface_features(const std::string& x, const std::string& y);

// freq_n(x,y) - freq_n(y,x); freq_n defined 0 when the hyponym has no
// candidates at all. Exactly antisymmetric.
double freq_diff(const std::string& x, const std::string& y,
                 const CandidateTable& table);

// g(y) - g(x), g(t) = ln(1 + distinct hyponyms of t).
double generality_diff(const std::string& x, const std::string& y,
                       const CandidateTable& table);

// Quantile binning for the scalar features; booleans use two fixed bins.
// Fitted once on training pairs, then frozen into the checkpoint.
class FeatureBinner {
 public:
  static constexpr int kDefaultBins = 8;

  // Order matches feature_names(): scalar features only.
  enum Scalar { SUFFIX_MATCH = 0, LCS_RATIO, LENGTH_DIFF, FREQ_DIFF, GENERALITY_DIFF, N_SCALARS };

  void fit(const std::vector<std::vector<double>>& samples_per_feature,
           int bins = kDefaultBins);
  bool fitted() const { return !boundaries_.empty(); }
  int bins() const { return bins_; }
  // Total: values outside the fitted range clamp to the first/last bin.
  int bin(Scalar feature, double value) const;

  const std::vector<std::vector<double>>& boundaries() const {
    return boundaries_;
  }
  void restore(std::vector<std::vector<double>> boundaries, int bins);

 private:
  int bins_ = kDefaultBins;
  std::vector<std::vector<double>> boundaries_;  // per scalar, bins-1 cuts
};

// Bin indices for one pair, in the fixed feature order:
// cap_x, cap_y, ends_with, contains (2 bins each), then the five scalars.
struct FeatureBins {
  std::vector<int> surface;  // 7 entries when surface features enabled
  std::vector<int> fg;       // 2 entries when frequency/generality enabled
};

FeatureBins compute_feature_bins(const std::string& x, const std::string& y,
                                 const CandidateTable& table,
                                 const FeatureBinner& binner,
                                 bool use_surface, bool use_fg);

}  // namespace taxorl

#endif
