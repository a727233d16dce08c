#pragma once

#include <set>

namespace famapf::detail {

// OPEN ordered by a lower-bound key, FOCAL holding the open nodes whose cost key is within
// omega of the smallest lower bound, ordered by a secondary criterion.
//
// Node must expose `double open_key() const`, `double focal_key() const` and the flags
// `bool in_open`, `bool in_focal`. Keys must not change while a node is queued.
template <class Node, class OpenLess, class FocalLess>
class FocalQueue {
 public:
  explicit FocalQueue(double omega) : omega_(omega) {}

  bool empty() const { return open_.empty(); }
  std::size_t size() const { return open_.size(); }
  double lower_bound() const { return f_min_; }

  void push(Node* n) {
    n->in_open = true;
    open_.insert(n);
    if (initialised_ && n->focal_key() <= threshold(f_min_)) {
      n->in_focal = true;
      focal_.insert(n);
    }
  }

  void erase(Node* n) {
    if (n->in_focal) focal_.erase(n);
    if (n->in_open) open_.erase(n);
    n->in_open = false;
    n->in_focal = false;
  }

  // Removes and returns the best FOCAL node, or nullptr when OPEN is empty.
  Node* pop() {
    if (open_.empty()) return nullptr;
    const double m = (*open_.begin())->open_key();
    if (!initialised_ || m < f_min_) {
      rebuild(m);
    } else if (m > f_min_) {
      extend(m);
    }
    Node* n = focal_.empty() ? *open_.begin() : *focal_.begin();
    erase(n);
    return n;
  }

 private:
  double threshold(double m) const { return omega_ * m * (1.0 + 1e-12) + 1e-9; }

  void rebuild(double m) {
    for (Node* n : focal_) n->in_focal = false;
    focal_.clear();
    f_min_ = m;
    initialised_ = true;
    extend(m);
  }

  void extend(double m) {
    f_min_ = m;
    const double thr = threshold(m);
    for (Node* n : open_) {
      if (n->open_key() > thr) break;
      if (!n->in_focal && n->focal_key() <= thr) {
        n->in_focal = true;
        focal_.insert(n);
      }
    }
  }

  double omega_;
  double f_min_ = 0.0;
  bool initialised_ = false;
  std::set<Node*, OpenLess> open_;
  std::set<Node*, FocalLess> focal_;
};

}  // namespace famapf::detail
