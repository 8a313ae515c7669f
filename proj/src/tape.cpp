#include "socialpec/tape.hpp"

namespace socialpec {

Var Tape::push(Slot s) {
  slots_.push_back(std::move(s));
  return Var{static_cast<std::uint32_t>(slots_.size() - 1)};
}

Var Tape::constant(Tensor t) {
  Slot s;
  s.owned = std::move(t);
  return push(std::move(s));
}

Var Tape::ref(const Tensor& t) {
  auto it = staged_.find(&t);
  if (it != staged_.end()) return Var{it->second};
  Slot s;
  s.external = &t;
  Var v = push(std::move(s));
  staged_.emplace(&t, v.id);
  return v;
}

Var Tape::param(Parameter& p) {
  auto it = staged_.find(&p);
  if (it != staged_.end()) return Var{it->second};
  Slot s;
  s.external = &p.value;
  s.bound = &p;
  Var v = push(std::move(s));
  staged_.emplace(&p, v.id);
  return v;
}

Var Tape::make(Tensor out, std::function<void(Tape&, Var)> pullback) {
  Slot s;
  s.owned = std::move(out);
  Var v = push(std::move(s));
  nodes_.emplace_back(v.id, std::move(pullback));
  return v;
}

void Tape::backward(Var loss) {
  check(loss);
  if (backward_done_) {
    throw ContractError("tape: backward() already ran");
  }
  if (val(loss).numel() != 1) {
    throw ContractError("tape: loss must be scalar, got shape " + shape_str(val(loss).shape()));
  }
  grads_.clear();
  grads_.reserve(slots_.size());
  for (const Slot& s : slots_) grads_.emplace_back(Tensor::zeros(s.value().shape()));
  grads_[loss.id][0] = 1.0;
  for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) {
    it->second(*this, Var{it->first});
  }
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    if (slots_[i].bound != nullptr) slots_[i].bound->grad.add(grads_[i]);
  }
  backward_done_ = true;
}

}  // namespace socialpec
