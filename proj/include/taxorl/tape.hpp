#ifndef TAXORL_TAPE_HPP
#define TAXORL_TAPE_HPP

#include <functional>
#include <string>
#include <vector>

#include "taxorl/tensor.hpp"

namespace taxorl {

struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;

  Parameter() = default;
  Parameter(std::string n, Tensor t)
      : name(std::move(n)), value(std::move(t)), grad(value.shape) {}
  void zero_grad() { std::fill(grad.v.begin(), grad.v.end(), 0.0); }
};

using NodeId = int;

// Dynamic reverse-mode tape, rebuilt per episode. Nodes hold values and
// gradients; backward closures accumulate into earlier nodes and, for
// parameter leaves and embedding lookups, directly into Parameter::grad.
// Parameters referenced by a tape must outlive it.
class Tape {
 public:
  NodeId constant(Tensor t);
  NodeId leaf(Parameter& p);               // whole-tensor parameter use
  NodeId lookup(Parameter& table, int row);  // row of an embedding table

  NodeId matmul(NodeId a, NodeId b);       // [m,k]x[k,n] -> [m,n]
  NodeId matvec(NodeId m, NodeId x);       // [m,k]x[k] -> [m]
  NodeId vecmat(NodeId x, NodeId m);       // [k]x[k,n] -> [n]
  NodeId add(NodeId a, NodeId b);          // same shape
  NodeId add_bias_cols(NodeId m, NodeId b);  // add b[r] to every column of m
  NodeId add_scalar_all(NodeId x, NodeId s);  // broadcast scalar add
  NodeId mul(NodeId a, NodeId b);          // elementwise, same shape
  NodeId scale(NodeId a, double c);
  NodeId concat(const std::vector<NodeId>& parts);   // vectors -> vector
  NodeId slice(NodeId x, int offset, int len);       // vector slice
  NodeId stack_cols(const std::vector<NodeId>& cols);  // d-vectors -> [d,n]
  NodeId flatten(NodeId x);  // any shape -> vector view of the elements
  NodeId relu(NodeId x);
  NodeId tanh_(NodeId x);
  NodeId sigmoid(NodeId x);
  NodeId softmax_vec(NodeId logits);
  // log softmax(logits)[index], numerically stable; the policy-gradient core.
  NodeId log_softmax_pick(NodeId logits, int index);
  // Frequency-weighted average of same-length vectors; weights are constants.
  NodeId mean_weighted(const std::vector<NodeId>& vecs,
                       const std::vector<double>& weights);
  // sum_i coeffs[i] * scalars[i]; used to assemble episode losses.
  NodeId scalar_combo(const std::vector<NodeId>& scalars,
                      const std::vector<double>& coeffs);
  // Numerically stable -[t*log(sig(z)) + (1-t)*log(1-sig(z))].
  NodeId bce_with_logit(NodeId logit, double target);

  // One LSTM step composed from primitives. wx:[4H,d] wh:[4H,H] b:[4H],
  // gate order i,f,g,o. Returns (h', c').
  std::pair<NodeId, NodeId> lstm_step(NodeId x, NodeId h, NodeId c, NodeId wx,
                                      NodeId wh, NodeId b);

  const Tensor& value(NodeId id) const { return nodes_[id].value; }
  Tensor& grad(NodeId id) { return nodes_[id].grad; }

  // Accumulates d(loss)/d(param) into every reachable Parameter::grad.
  void backward(NodeId loss);

  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    std::function<void(Tape&)> back;  // empty for constants
  };
  std::vector<Node> nodes_;

  NodeId push(Tensor value, std::function<void(Tape&)> back);
};

}  // namespace taxorl

#endif
