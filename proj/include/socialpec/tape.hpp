#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "socialpec/tensor.hpp"

namespace socialpec {

// Handle to a tensor slot on a Tape.
struct Var {
  std::uint32_t id = 0;
};

// Trainable tensor together with its gradient accumulator.
struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;

  Parameter() = default;
  Parameter(std::string name_, Tensor value_)
      : name(std::move(name_)), value(std::move(value_)), grad(Tensor::zeros(value.shape())) {}

  void zero_grad() { grad.fill(0.0); }
};

// Reverse-mode tape. Every primitive appends the executed node in order;
// backward() replays the nodes once in reverse and finally deposits each
// bound slot's adjoint into its Parameter's grad (additively, so several
// tapes or uses accumulate).
//
// Tensors staged with ref()/param() are referenced, not copied, and must
// outlive the tape. One tape per logical thread of execution.
class Tape {
 public:
  // Leaf owned by the tape.
  Var constant(Tensor t);

  // Leaf referencing external storage; no gradient is delivered anywhere.
  // Repeated staging of the same tensor returns the same slot.
  Var ref(const Tensor& t);

  // Leaf bound to a Parameter: backward() adds d(loss)/d(slot) into p.grad.
  // Repeated staging of the same parameter returns the same slot.
  Var param(Parameter& p);

  const Tensor& val(Var v) const {
    check(v);
    return slots_[v.id].value();
  }

  // Adjoint of a slot; valid while backward() runs and afterwards.
  Tensor& grad(Var v) {
    check(v);
    if (grads_.empty()) {
      throw ContractError("tape: gradients are only available during/after backward()");
    }
    return grads_[v.id];
  }

  // Used by op implementations: store a forward result plus its pullback.
  // The pullback receives the output var so it can read its own adjoint.
  Var make(Tensor out, std::function<void(Tape&, Var)> pullback);

  // Seeds d(loss)/d(loss) = 1 and runs every recorded node exactly once in
  // reverse order. The loss must be scalar. One backward per tape.
  void backward(Var loss);

  bool backward_done() const { return backward_done_; }
  std::size_t num_slots() const { return slots_.size(); }

 private:
  struct Slot {
    Tensor owned;
    const Tensor* external = nullptr;
    Parameter* bound = nullptr;
    const Tensor& value() const { return external ? *external : owned; }
  };

  void check(Var v) const {
    if (v.id >= slots_.size()) {
      throw ContractError("tape: var " + std::to_string(v.id) + " out of range");
    }
  }

  Var push(Slot s);

  std::vector<Slot> slots_;
  std::vector<std::pair<std::uint32_t, std::function<void(Tape&, Var)>>> nodes_;
  std::vector<Tensor> grads_;
  std::unordered_map<const void*, std::uint32_t> staged_;
  bool backward_done_ = false;
};

}  // namespace socialpec
