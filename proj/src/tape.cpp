#include "taxorl/tape.hpp"

#include <algorithm>
#include <cmath>

namespace taxorl {

namespace {

void check_same(const Tensor& a, const Tensor& b, const char* op) {
  if (!a.same_shape(b))
    throw ShapeError(std::string(op) + ": shape mismatch " + a.shape_str() +
                     " vs " + b.shape_str());
}

}  // namespace

NodeId Tape::push(Tensor value, std::function<void(Tape&)> back) {
  Node n;
  n.grad = Tensor(value.shape);
  n.value = std::move(value);
  n.back = std::move(back);
  nodes_.push_back(std::move(n));
  return static_cast<NodeId>(nodes_.size()) - 1;
}

NodeId Tape::constant(Tensor t) { return push(std::move(t), {}); }

NodeId Tape::leaf(Parameter& p) {
  Parameter* pp = &p;
  NodeId id = push(p.value, {});
  nodes_[id].back = [id, pp](Tape& t) {
    const Tensor& g = t.nodes_[id].grad;
    for (std::size_t i = 0; i < g.v.size(); ++i) pp->grad.v[i] += g.v[i];
  };
  return id;
}

NodeId Tape::lookup(Parameter& table, int row) {
  if (row < 0 || row >= table.value.rows())
    throw std::out_of_range("lookup: row " + std::to_string(row) +
                            " out of range for " + table.name);
  int d = table.value.cols();
  Tensor out({d});
  for (int j = 0; j < d; ++j) out.v[j] = table.value.at(row, j);
  Parameter* pp = &table;
  NodeId id = push(std::move(out), {});
  nodes_[id].back = [id, pp, row, d](Tape& t) {
    const Tensor& g = t.nodes_[id].grad;
    for (int j = 0; j < d; ++j) pp->grad.at(row, j) += g.v[j];
  };
  return id;
}

NodeId Tape::matmul(NodeId a, NodeId b) {
  const Tensor& A = nodes_[a].value;
  const Tensor& B = nodes_[b].value;
  if (A.shape.size() != 2 || B.shape.size() != 2 || A.cols() != B.rows())
    throw ShapeError("matmul: incompatible " + A.shape_str() + " x " +
                     B.shape_str());
  int m = A.rows(), k = A.cols(), n = B.cols();
  Tensor C({m, n});
  for (int i = 0; i < m; ++i)
    for (int l = 0; l < k; ++l) {
      double aval = A.at(i, l);
      if (aval == 0.0) continue;
      for (int j = 0; j < n; ++j) C.at(i, j) += aval * B.at(l, j);
    }
  NodeId id = push(std::move(C), {});
  nodes_[id].back = [id, a, b, m, k, n](Tape& t) {
    const Tensor& G = t.nodes_[id].grad;
    const Tensor& A2 = t.nodes_[a].value;
    const Tensor& B2 = t.nodes_[b].value;
    Tensor& GA = t.nodes_[a].grad;
    Tensor& GB = t.nodes_[b].grad;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) {
        double g = G.at(i, j);
        if (g == 0.0) continue;
        for (int l = 0; l < k; ++l) {
          GA.at(i, l) += g * B2.at(l, j);
          GB.at(l, j) += g * A2.at(i, l);
        }
      }
  };
  return id;
}

NodeId Tape::matvec(NodeId m, NodeId x) {
  const Tensor& M = nodes_[m].value;
  const Tensor& X = nodes_[x].value;
  if (M.shape.size() != 2 || X.shape.size() != 1 || M.cols() != X.rows())
    throw ShapeError("matvec: incompatible " + M.shape_str() + " x " +
                     X.shape_str());
  int r = M.rows(), k = M.cols();
  Tensor out({r});
  for (int i = 0; i < r; ++i) {
    double s = 0;
    for (int l = 0; l < k; ++l) s += M.at(i, l) * X.v[l];
    out.v[i] = s;
  }
  NodeId id = push(std::move(out), {});
  nodes_[id].back = [id, m, x, r, k](Tape& t) {
    const Tensor& G = t.nodes_[id].grad;
    const Tensor& M2 = t.nodes_[m].value;
    const Tensor& X2 = t.nodes_[x].value;
    Tensor& GM = t.nodes_[m].grad;
    Tensor& GX = t.nodes_[x].grad;
    for (int i = 0; i < r; ++i) {
      double g = G.v[i];
      if (g == 0.0) continue;
      for (int l = 0; l < k; ++l) {
        GM.at(i, l) += g * X2.v[l];
        GX.v[l] += g * M2.at(i, l);
      }
    }
  };
  return id;
}

NodeId Tape::vecmat(NodeId x, NodeId m) {
  const Tensor& X = nodes_[x].value;
  const Tensor& M = nodes_[m].value;
  if (X.shape.size() != 1 || M.shape.size() != 2 || X.rows() != M.rows())
    throw ShapeError("vecmat: incompatible " + X.shape_str() + " x " +
                     M.shape_str());
  int k = M.rows(), n = M.cols();
  Tensor out({n});
  for (int l = 0; l < k; ++l) {
    double xv = X.v[l];
    if (xv == 0.0) continue;
    for (int j = 0; j < n; ++j) out.v[j] += xv * M.at(l, j);
  }
  NodeId id = push(std::move(out), {});
  nodes_[id].back = [id, x, m, k, n](Tape& t) {
    const Tensor& G = t.nodes_[id].grad;
    const Tensor& X2 = t.nodes_[x].value;
    const Tensor& M2 = t.nodes_[m].value;
    Tensor& GX = t.nodes_[x].grad;
    Tensor& GM = t.nodes_[m].grad;
    for (int j = 0; j < n; ++j) {
      double g = G.v[j];
      if (g == 0.0) continue;
      for (int l = 0; l < k; ++l) {
        GX.v[l] += g * M2.at(l, j);
        GM.at(l, j) += g * X2.v[l];
      }
    }
  };
  return id;
}

NodeId Tape::add(NodeId a, NodeId b) {
  const Tensor& A = nodes_[a].value;
  const Tensor& B = nodes_[b].value;
  check_same(A, B, "add");
  Tensor out = A;
  for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] += B.v[i];
  NodeId id = push(std::move(out), {});
  nodes_[id].back = [id, a, b](Tape& t) {
    const Tensor& G = t.nodes_[id].grad;
    for (std::size_t i = 0; i < G.v.size(); ++i) {
      t.nodes_[a].grad.v[i] += G.v[i];
      t.nodes_[b].grad.v[i] += G.v[i];
    }
  };
  return id;
}

NodeId Tape::add_bias_cols(NodeId m, NodeId b) {
  const Tensor& M = nodes_[m].value;
  const Tensor& B = nodes_[b].value;
  if (M.shape.size() != 2 || B.shape.size() != 1 || B.rows() != M.rows())
    throw ShapeError("add_bias_cols: incompatible " + M.shape_str() + " + " +
                     B.shape_str());
  int r = M.rows(), n = M.cols();
  Tensor out = M;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < n; ++j) out.at(i, j) += B.v[i];
  NodeId id = push(std::move(out), {});
  nodes_[id].back = [id, m, b, r, n](Tape& t) {
    const Tensor& G = t.nodes_[id].grad;
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < n; ++j) {
        t.nodes_[m].grad.at(i, j) += G.at(i, j);
        t.nodes_[b].grad.v[i] += G.at(i, j);
      }
  };
  return id;
}

NodeId Tape::add_scalar_all(NodeId x, NodeId s) {
  const Tensor& X = nodes_[x].value;
  const Tensor& S = nodes_[s].value;
  if (S.count() != 1) throw ShapeError("add_scalar_all: rhs not scalar");
  Tensor out = X;
  for (double& v : out.v) v += S.v[0];
  NodeId id = push(std::move(out), {});
  nodes_[id].back = [id, x, s](Tape& t) {
    const Tensor& G = t.nodes_[id].grad;
    for (std::size_t i = 0; i < G.v.size(); ++i) {
      t.nodes_[x].grad.v[i] += G.v[i];
      t.nodes_[s].grad.v[0] += G.v[i];
    }
  };
  return id;
}

NodeId Tape::mul(NodeId a, NodeId b) {
  const Tensor& A = nodes_[a].value;
  const Tensor& B = nodes_[b].value;
  check_same(A, B, "mul");
  Tensor out = A;
  for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] *= B.v[i];
  NodeId id = push(std::move(out), {});
  nodes_[id].back = [id, a, b](Tape& t) {
    const Tensor& G = t.nodes_[id].grad;
    const Tensor& A2 = t.nodes_[a].value;
    const Tensor& B2 = t.nodes_[b].value;
    for (std::size_t i = 0; i < G.v.size(); ++i) {
      t.nodes_[a].grad.v[i] += G.v[i] * B2.v[i];
      t.nodes_[b].grad.v[i] += G.v[i] * A2.v[i];
    }
  };
  return id;
}

NodeId Tape::scale(NodeId a, double c) {
  Tensor out = nodes_[a].value;
  for (double& v : out.v) v *= c;
  NodeId id = push(std::move(out), {});
  nodes_[id].back = [id, a, c](Tape& t) {
    const Tensor& G = t.nodes_[id].grad;
    for (std::size_t i = 0; i < G.v.size(); ++i)
      t.nodes_[a].grad.v[i] += c * G.v[i];
  };
  return id;
}

NodeId Tape::concat(const std::vector<NodeId>& parts) {
  Tensor out({0});
  out.v.clear();
  std::vector<int> lens;
  for (NodeId p : parts) {
    const Tensor& T = nodes_[p].value;
    if (T.shape.size() != 1) throw ShapeError("concat: non-vector part");
    lens.push_back(T.rows());
    out.v.insert(out.v.end(), T.v.begin(), T.v.end());
  }
  out.shape = {static_cast<int>(out.v.size())};
  NodeId id = push(std::move(out), {});
  std::vector<NodeId> srcs = parts;
  nodes_[id].back = [id, srcs, lens](Tape& t) {
    const Tensor& G = t.nodes_[id].grad;
    std::size_t off = 0;
    for (std::size_t p = 0; p < srcs.size(); ++p) {
      for (int j = 0; j < lens[p]; ++j)
        t.nodes_[srcs[p]].grad.v[j] += G.v[off + j];
      off += lens[p];
    }
  };
  return id;
}

NodeId Tape::slice(NodeId x, int offset, int len) {
  const Tensor& X = nodes_[x].value;
  if (X.shape.size() != 1 || offset < 0 || offset + len > X.rows())
    throw ShapeError("slice: out of range on " + X.shape_str());
  Tensor out({len});
  for (int j = 0; j < len; ++j) out.v[j] = X.v[offset + j];
  NodeId id = push(std::move(out), {});
  nodes_[id].back = [id, x, offset, len](Tape& t) {
    const Tensor& G = t.nodes_[id].grad;
    for (int j = 0; j < len; ++j) t.nodes_[x].grad.v[offset + j] += G.v[j];
  };
  return id;
}

NodeId Tape::stack_cols(const std::vector<NodeId>& cols) {
  if (cols.empty()) throw ShapeError("stack_cols: empty input");
  int d = nodes_[cols[0]].value.rows();
  int n = static_cast<int>(cols.size());
  Tensor out({d, n});
  for (int j = 0; j < n; ++j) {
    const Tensor& C = nodes_[cols[j]].value;
    if (C.shape.size() != 1 || C.rows() != d)
      throw ShapeError("stack_cols: column " + std::to_string(j) +
                       " has shape " + C.shape_str());
    for (int i = 0; i < d; ++i) out.at(i, j) = C.v[i];
  }
  NodeId id = push(std::move(out), {});
  std::vector<NodeId> srcs = cols;
  nodes_[id].back = [id, srcs, d, n](Tape& t) {
    const Tensor& G = t.nodes_[id].grad;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < d; ++i)
        t.nodes_[srcs[j]].grad.v[i] += G.at(i, j);
  };
  return id;
}

NodeId Tape::flatten(NodeId x) {
  Tensor out = nodes_[x].value;
  out.shape = {static_cast<int>(out.v.size())};
  NodeId id = push(std::move(out), {});
  nodes_[id].back = [id, x](Tape& t) {
    const Tensor& G = t.nodes_[id].grad;
    for (std::size_t i = 0; i < G.v.size(); ++i)
      t.nodes_[x].grad.v[i] += G.v[i];
  };
  return id;
}

NodeId Tape::relu(NodeId x) {
  Tensor out = nodes_[x].value;
  for (double& v : out.v) v = v > 0 ? v : 0.0;
  NodeId id = push(std::move(out), {});
  nodes_[id].back = [id, x](Tape& t) {
    const Tensor& G = t.nodes_[id].grad;
    const Tensor& X = t.nodes_[x].value;
    for (std::size_t i = 0; i < G.v.size(); ++i)
      if (X.v[i] > 0) t.nodes_[x].grad.v[i] += G.v[i];
  };
  return id;
}

NodeId Tape::tanh_(NodeId x) {
  Tensor out = nodes_[x].value;
  for (double& v : out.v) v = std::tanh(v);
  NodeId id = push(std::move(out), {});
  nodes_[id].back = [id, x](Tape& t) {
    const Tensor& G = t.nodes_[id].grad;
    const Tensor& Y = t.nodes_[id].value;
    for (std::size_t i = 0; i < G.v.size(); ++i)
      t.nodes_[x].grad.v[i] += G.v[i] * (1.0 - Y.v[i] * Y.v[i]);
  };
  return id;
}

NodeId Tape::sigmoid(NodeId x) {
  Tensor out = nodes_[x].value;
  for (double& v : out.v) v = 1.0 / (1.0 + std::exp(-v));
  NodeId id = push(std::move(out), {});
  nodes_[id].back = [id, x](Tape& t) {
    const Tensor& G = t.nodes_[id].grad;
    const Tensor& Y = t.nodes_[id].value;
    for (std::size_t i = 0; i < G.v.size(); ++i)
      t.nodes_[x].grad.v[i] += G.v[i] * Y.v[i] * (1.0 - Y.v[i]);
  };
  return id;
}

NodeId Tape::softmax_vec(NodeId logits) {
  const Tensor& Z = nodes_[logits].value;
  if (Z.shape.size() != 1) throw ShapeError("softmax_vec: non-vector input");
  double mx = *std::max_element(Z.v.begin(), Z.v.end());
  Tensor out = Z;
  double s = 0;
  for (double& v : out.v) {
    v = std::exp(v - mx);
    s += v;
  }
  for (double& v : out.v) v /= s;
  NodeId id = push(std::move(out), {});
  nodes_[id].back = [id, logits](Tape& t) {
    const Tensor& G = t.nodes_[id].grad;
    const Tensor& P = t.nodes_[id].value;
    double dot = 0;
    for (std::size_t i = 0; i < G.v.size(); ++i) dot += G.v[i] * P.v[i];
    for (std::size_t i = 0; i < G.v.size(); ++i)
      t.nodes_[logits].grad.v[i] += P.v[i] * (G.v[i] - dot);
  };
  return id;
}

NodeId Tape::log_softmax_pick(NodeId logits, int index) {
  const Tensor& Z = nodes_[logits].value;
  if (Z.shape.size() != 1 || index < 0 || index >= Z.rows())
    throw std::invalid_argument("log_softmax_pick: bad index");
  double mx = *std::max_element(Z.v.begin(), Z.v.end());
  double s = 0;
  for (double v : Z.v) s += std::exp(v - mx);
  double lse = mx + std::log(s);
  Tensor out = Tensor::scalar(Z.v[index] - lse);
  NodeId id = push(std::move(out), {});
  nodes_[id].back = [id, logits, index](Tape& t) {
    double g = t.nodes_[id].grad.v[0];
    if (g == 0.0) return;
    const Tensor& Z2 = t.nodes_[logits].value;
    double mx2 = *std::max_element(Z2.v.begin(), Z2.v.end());
    double s2 = 0;
    for (double v : Z2.v) s2 += std::exp(v - mx2);
    for (std::size_t i = 0; i < Z2.v.size(); ++i) {
      double p = std::exp(Z2.v[i] - mx2) / s2;
      double ind = (static_cast<int>(i) == index) ? 1.0 : 0.0;
      t.nodes_[logits].grad.v[i] += g * (ind - p);
    }
  };
  return id;
}

NodeId Tape::mean_weighted(const std::vector<NodeId>& vecs,
                           const std::vector<double>& weights) {
  if (vecs.empty() || vecs.size() != weights.size())
    throw std::invalid_argument("mean_weighted: bad arguments");
  double wsum = 0;
  for (double w : weights) wsum += w;
  if (wsum <= 0) throw std::invalid_argument("mean_weighted: weight sum <= 0");
  int d = nodes_[vecs[0]].value.rows();
  Tensor out({d});
  for (std::size_t p = 0; p < vecs.size(); ++p) {
    const Tensor& V = nodes_[vecs[p]].value;
    check_same(V, out, "mean_weighted");
    double c = weights[p] / wsum;
    for (int i = 0; i < d; ++i) out.v[i] += c * V.v[i];
  }
  NodeId id = push(std::move(out), {});
  std::vector<NodeId> srcs = vecs;
  std::vector<double> ws = weights;
  nodes_[id].back = [id, srcs, ws, wsum, d](Tape& t) {
    const Tensor& G = t.nodes_[id].grad;
    for (std::size_t p = 0; p < srcs.size(); ++p) {
      double c = ws[p] / wsum;
      for (int i = 0; i < d; ++i) t.nodes_[srcs[p]].grad.v[i] += c * G.v[i];
    }
  };
  return id;
}

NodeId Tape::scalar_combo(const std::vector<NodeId>& scalars,
                          const std::vector<double>& coeffs) {
  if (scalars.size() != coeffs.size())
    throw std::invalid_argument("scalar_combo: size mismatch");
  double s = 0;
  for (std::size_t i = 0; i < scalars.size(); ++i) {
    if (nodes_[scalars[i]].value.count() != 1)
      throw ShapeError("scalar_combo: non-scalar term");
    s += coeffs[i] * nodes_[scalars[i]].value.v[0];
  }
  NodeId id = push(Tensor::scalar(s), {});
  std::vector<NodeId> srcs = scalars;
  std::vector<double> cs = coeffs;
  nodes_[id].back = [id, srcs, cs](Tape& t) {
    double g = t.nodes_[id].grad.v[0];
    for (std::size_t i = 0; i < srcs.size(); ++i)
      t.nodes_[srcs[i]].grad.v[0] += g * cs[i];
  };
  return id;
}

NodeId Tape::bce_with_logit(NodeId logit, double target) {
  const Tensor& Z = nodes_[logit].value;
  if (Z.count() != 1) throw ShapeError("bce_with_logit: non-scalar logit");
  double z = Z.v[0];
  // log(1+e^z) computed stably.
  double softplus = z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
  double loss = softplus - target * z;
  NodeId id = push(Tensor::scalar(loss), {});
  nodes_[id].back = [id, logit, target](Tape& t) {
    double g = t.nodes_[id].grad.v[0];
    double z2 = t.nodes_[logit].value.v[0];
    double sig = 1.0 / (1.0 + std::exp(-z2));
    t.nodes_[logit].grad.v[0] += g * (sig - target);
  };
  return id;
}

std::pair<NodeId, NodeId> Tape::lstm_step(NodeId x, NodeId h, NodeId c,
                                          NodeId wx, NodeId wh, NodeId b) {
  int hd = nodes_[h].value.rows();
  NodeId gates = add(add(matvec(wx, x), matvec(wh, h)), b);
  NodeId gi = sigmoid(slice(gates, 0, hd));
  NodeId gf = sigmoid(slice(gates, hd, hd));
  NodeId gg = tanh_(slice(gates, 2 * hd, hd));
  NodeId go = sigmoid(slice(gates, 3 * hd, hd));
  NodeId c_next = add(mul(gf, c), mul(gi, gg));
  NodeId h_next = mul(go, tanh_(c_next));
  return {h_next, c_next};
}

void Tape::backward(NodeId loss) {
  if (nodes_[loss].value.count() != 1)
    throw std::invalid_argument("backward: loss is not a scalar");
  // Node grads are scratch per pass; Parameter grads accumulate across passes.
  for (Node& n : nodes_) std::fill(n.grad.v.begin(), n.grad.v.end(), 0.0);
  nodes_[loss].grad.v[0] = 1.0;
  for (int i = loss; i >= 0; --i) {
    if (nodes_[i].back) nodes_[i].back(*this);
  }
}

}  // namespace taxorl
