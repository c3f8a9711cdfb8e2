#pragma once

#include <string>

namespace setcalc {

/// The four boolean set operations used throughout: union, intersection,
/// difference, symmetric difference.
enum class SetOp { Union, Intersect, Minus, SymDiff };

inline const char* to_string(SetOp op) {
  switch (op) {
    case SetOp::Union:
      return "union";
    case SetOp::Intersect:
      return "intersect";
    case SetOp::Minus:
      return "minus";
    case SetOp::SymDiff:
      return "sym_diff";
  }
  return "?";
}

inline bool apply_op(bool a, bool b, SetOp op) {
  switch (op) {
    case SetOp::Union:
      return a || b;
    case SetOp::Intersect:
      return a && b;
    case SetOp::Minus:
      return a && !b;
    case SetOp::SymDiff:
      return a != b;
  }
  return false;
}

}  // namespace setcalc
