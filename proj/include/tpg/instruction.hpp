#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <tuple>
#include <type_traits>
#include <utility>
#include <vector>

#include "tpg/data_source.hpp"

namespace tpg {

using InstructionFn = std::function<double(std::span<const Operand>)>;

/// Optional direct form of an instruction whose operands are all float64
/// scalars: receives the operand values as a plain array.
using ScalarKernel = double (*)(const double* operands);

/// A typed operation usable in program lines. The evaluation function must be
/// pure: bit-equal operands give a bit-equal result. Results are always
/// float64 and follow IEEE semantics (no trapping).
class Instruction {
 public:
  Instruction(std::string name, std::vector<OperandType> signature, InstructionFn fn);
  /// `kernel` must compute exactly what `fn` computes. It is ignored unless
  /// every operand is a float64 scalar and there are at most kMaxKernelArity.
  Instruction(std::string name, std::vector<OperandType> signature, InstructionFn fn, ScalarKernel kernel);

  static constexpr std::size_t kMaxKernelArity = 8;

  const std::string& name() const noexcept { return name_; }
  std::span<const OperandType> signature() const noexcept { return signature_; }
  std::size_t arity() const noexcept { return signature_.size(); }

  /// Checks the operands against the signature, then evaluates.
  double execute(std::span<const Operand> operands) const;

  /// Evaluates without checking; the program engine validates lines ahead of time.
  double evaluate(std::span<const Operand> operands) const { return fn_(operands); }

  /// Direct form used by the program engine when available, else nullptr.
  ScalarKernel scalar_kernel() const noexcept { return kernel_; }

  /// Scratch space needed if every operand had to be converted.
  OperandScratch::Need scratch_need() const noexcept;

 private:
  std::string name_;
  std::vector<OperandType> signature_;
  InstructionFn fn_;
  ScalarKernel kernel_ = nullptr;
};

/// Throws EmptySignature when `signature` is empty.
Instruction make_instruction(std::vector<OperandType> signature, InstructionFn fn, std::string name);

namespace detail {

template <typename T>
struct operand_traits;

template <typename T>
  requires requires { element_kind_of<T>::value; }
struct operand_traits<T> {
  static OperandType type() { return OperandType::scalar(element_kind_of<T>::value); }
  static T convert(const Operand& op) { return op.scalar<T>(); }
};

template <typename T, std::size_t N>
  requires requires { element_kind_of<T>::value; }
struct operand_traits<std::array<T, N>> {
  static OperandType type() {
    return OperandType::vector(element_kind_of<T>::value, static_cast<std::uint32_t>(N));
  }
  static std::array<T, N> convert(const Operand& op) {
    std::array<T, N> out{};
    auto values = op.values<T>();
    for (std::size_t i = 0; i < N; ++i) out[i] = values[i];
    return out;
  }
};

template <typename T, std::size_t W, std::size_t H>
  requires requires { element_kind_of<T>::value; }
struct operand_traits<std::array<std::array<T, W>, H>> {
  static OperandType type() {
    return OperandType::matrix(element_kind_of<T>::value, static_cast<std::uint32_t>(H),
                               static_cast<std::uint32_t>(W));
  }
  static std::array<std::array<T, W>, H> convert(const Operand& op) {
    std::array<std::array<T, W>, H> out{};
    auto values = op.values<T>();
    for (std::size_t r = 0; r < H; ++r)
      for (std::size_t c = 0; c < W; ++c) out[r][c] = values[r * W + c];
    return out;
  }
};

}  // namespace detail

/// Builds an instruction from a typed callable. Operand types follow the C++
/// argument types: double, std::int64_t and std::int8_t scalars,
/// std::array<T, N> vectors, and std::array<std::array<T, W>, H> matrices.
///
///   auto scaled_sum = make_lambda_instruction<std::int64_t, std::array<std::int8_t, 2>>(
///       "scaled_sum", [](std::int64_t a, const std::array<std::int8_t, 2>& b) {
///         return static_cast<double>(a * (b[0] + b[1]));
///       });
template <typename... Args, typename F>
Instruction make_lambda_instruction(std::string name, F fn) {
  static_assert(sizeof...(Args) > 0, "an instruction needs at least one operand");
  std::vector<OperandType> signature{detail::operand_traits<Args>::type()...};
  ScalarKernel kernel = nullptr;
  if constexpr ((std::is_same_v<Args, double> && ...) && std::is_empty_v<F> &&
                std::is_default_constructible_v<F>) {
    kernel = [](const double* a) -> double {
      return [&]<std::size_t... I>(std::index_sequence<I...>) {
        return static_cast<double>(F{}(a[I]...));
      }(std::index_sequence_for<Args...>{});
    };
  }
  InstructionFn wrapped = [fn = std::move(fn)](std::span<const Operand> ops) -> double {
    return [&]<std::size_t... I>(std::index_sequence<I...>) {
      return static_cast<double>(fn(detail::operand_traits<Args>::convert(ops[I])...));
    }(std::index_sequence_for<Args...>{});
  };
  return Instruction(std::move(name), std::move(signature), std::move(wrapped), kernel);
}

/// Ordered, immutable list of instructions. Lines reference instructions by
/// their index in this list.
class InstructionSet {
 public:
  InstructionSet(std::string name, std::vector<Instruction> instructions);

  const std::string& name() const noexcept { return name_; }
  std::size_t size() const noexcept { return instructions_.size(); }
  const Instruction& operator[](std::size_t i) const { return instructions_[i]; }
  const Instruction& at(std::size_t i) const { return instructions_.at(i); }

  auto begin() const { return instructions_.begin(); }
  auto end() const { return instructions_.end(); }

  /// Largest per-line scratch need over all instructions.
  OperandScratch::Need scratch_need() const noexcept;
  std::size_t max_arity() const noexcept;

 private:
  std::string name_;
  std::vector<Instruction> instructions_;
};

/// {+, -, *, /, <} over float64 scalars.
InstructionSet build_iset_simple();
/// {+, -, *, /, cos, ln, exp, <} over float64 scalars.
InstructionSet build_iset_complex();

using InstructionSetFactory = std::function<InstructionSet()>;

/// Registers a named instruction set, replacing any previous one of that name.
/// "simple" and "complex" are always available.
void register_instruction_set(const std::string& name, InstructionSetFactory factory);

/// Throws Config when no set is registered under `name`.
std::shared_ptr<const InstructionSet> make_instruction_set(const std::string& name);

std::vector<std::string> instruction_set_names();

}  // namespace tpg
