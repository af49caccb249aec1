#ifndef TAXORL_ADAM_HPP
#define TAXORL_ADAM_HPP

#include <map>
#include <vector>

#include "taxorl/tape.hpp"

namespace taxorl {

class Adam {
 public:
  explicit Adam(double lr = 1e-3, double beta1 = 0.9, double beta2 = 0.999,
                double eps = 1e-8)
      : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

  // Applies one bias-corrected update to every parameter, then zeroes grads.
  void step(const std::vector<Parameter*>& params);

  long long step_count() const { return t_; }

 private:
  struct Moments {
    std::vector<double> m, v;
  };
  double lr_, beta1_, beta2_, eps_;
  long long t_ = 0;
  std::map<Parameter*, Moments> state_;
};

}  // namespace taxorl

#endif
