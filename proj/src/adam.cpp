#include "taxorl/adam.hpp"

#include <cmath>

namespace taxorl {

void Adam::step(const std::vector<Parameter*>& params) {
  ++t_;
  double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (Parameter* p : params) {
    Moments& mo = state_[p];
    if (mo.m.empty()) {
      mo.m.assign(p->value.v.size(), 0.0);
      mo.v.assign(p->value.v.size(), 0.0);
    }
    for (std::size_t i = 0; i < p->value.v.size(); ++i) {
      double g = p->grad.v[i];
      mo.m[i] = beta1_ * mo.m[i] + (1.0 - beta1_) * g;
      mo.v[i] = beta2_ * mo.v[i] + (1.0 - beta2_) * g * g;
      double mhat = mo.m[i] / bc1;
      double vhat = mo.v[i] / bc2;
      p->value.v[i] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
    }
    p->zero_grad();
  }
}

}  // namespace taxorl
