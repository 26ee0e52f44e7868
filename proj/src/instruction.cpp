#include "tpg/instruction.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

namespace tpg {

Instruction::Instruction(std::string name, std::vector<OperandType> signature, InstructionFn fn)
    : name_(std::move(name)), signature_(std::move(signature)), fn_(std::move(fn)) {
  if (signature_.empty()) throw Fault(FaultKind::EmptySignature, "instruction '" + name_ + "'");
  if (!fn_) throw Fault(FaultKind::InvalidArgument, "instruction '" + name_ + "' has no function");
}

Instruction::Instruction(std::string name, std::vector<OperandType> signature, InstructionFn fn,
                         ScalarKernel kernel)
    : Instruction(std::move(name), std::move(signature), std::move(fn)) {
  const bool scalar = signature_.size() <= kMaxKernelArity &&
                      std::all_of(signature_.begin(), signature_.end(), [](const OperandType& t) {
                        return t == OperandType::scalar(ElementKind::Float64);
                      });
  if (scalar) kernel_ = kernel;
}

double Instruction::execute(std::span<const Operand> operands) const {
  if (operands.size() != signature_.size()) {
    throw Fault(FaultKind::SignatureMismatch, name_ + " expects " + std::to_string(signature_.size()) +
                                                  " operands, got " + std::to_string(operands.size()));
  }
  for (std::size_t i = 0; i < operands.size(); ++i) {
    if (!(operands[i].type() == signature_[i])) {
      throw Fault(FaultKind::SignatureMismatch, name_ + " operand " + std::to_string(i) + " is " +
                                                    to_string(operands[i].type()) + ", expected " +
                                                    to_string(signature_[i]));
    }
  }
  return fn_(operands);
}

OperandScratch::Need Instruction::scratch_need() const noexcept {
  OperandScratch::Need need;
  for (const auto& type : signature_) {
    switch (type.kind()) {
      case ElementKind::Float64: need.f64 += type.element_count(); break;
      case ElementKind::Int64: need.i64 += type.element_count(); break;
      case ElementKind::Int8: need.i8 += type.element_count(); break;
    }
  }
  return need;
}

Instruction make_instruction(std::vector<OperandType> signature, InstructionFn fn, std::string name) {
  return Instruction(std::move(name), std::move(signature), std::move(fn));
}

InstructionSet::InstructionSet(std::string name, std::vector<Instruction> instructions)
    : name_(std::move(name)), instructions_(std::move(instructions)) {
  if (instructions_.empty()) throw Fault(FaultKind::InvalidArgument, "instruction set '" + name_ + "' is empty");
}

OperandScratch::Need InstructionSet::scratch_need() const noexcept {
  OperandScratch::Need need;
  for (const auto& instruction : instructions_) {
    const auto n = instruction.scratch_need();
    need.f64 = std::max(need.f64, n.f64);
    need.i64 = std::max(need.i64, n.i64);
    need.i8 = std::max(need.i8, n.i8);
  }
  return need;
}

std::size_t InstructionSet::max_arity() const noexcept {
  std::size_t arity = 0;
  for (const auto& instruction : instructions_) arity = std::max(arity, instruction.arity());
  return arity;
}

namespace {

const OperandType kF64 = OperandType::scalar(ElementKind::Float64);

template <double (*Op)(double, double)>
Instruction binary(std::string name) {
  return Instruction(
      std::move(name), {kF64, kF64},
      [](std::span<const Operand> ops) { return Op(ops[0].scalar<double>(), ops[1].scalar<double>()); },
      [](const double* a) { return Op(a[0], a[1]); });
}

template <double (*Op)(double)>
Instruction unary(std::string name) {
  return Instruction(
      std::move(name), {kF64}, [](std::span<const Operand> ops) { return Op(ops[0].scalar<double>()); },
      [](const double* a) { return Op(a[0]); });
}

double add(double a, double b) { return a + b; }
double sub(double a, double b) { return a - b; }
double mul(double a, double b) { return a * b; }
double divide(double a, double b) { return a / b; }
double cond_negate(double a, double b) { return a < b ? -a : a; }
double cosine(double a) { return std::cos(a); }
double natural_log(double a) { return std::log(a); }
double exponential(double a) { return std::exp(a); }

std::vector<Instruction> arithmetic() {
  std::vector<Instruction> out;
  out.push_back(binary<add>("add"));
  out.push_back(binary<sub>("sub"));
  out.push_back(binary<mul>("mul"));
  out.push_back(binary<divide>("div"));
  return out;
}

struct Registry {
  std::mutex mutex;
  std::map<std::string, InstructionSetFactory> factories{
      {"simple", build_iset_simple},
      {"complex", build_iset_complex},
  };
};

Registry& registry() {
  static Registry r;
  return r;
}

}  // namespace

InstructionSet build_iset_simple() {
  auto instructions = arithmetic();
  instructions.push_back(binary<cond_negate>("lt"));
  return InstructionSet("simple", std::move(instructions));
}

InstructionSet build_iset_complex() {
  auto instructions = arithmetic();
  instructions.push_back(unary<cosine>("cos"));
  instructions.push_back(unary<natural_log>("ln"));
  instructions.push_back(unary<exponential>("exp"));
  instructions.push_back(binary<cond_negate>("lt"));
  return InstructionSet("complex", std::move(instructions));
}

void register_instruction_set(const std::string& name, InstructionSetFactory factory) {
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  r.factories[name] = std::move(factory);
}

std::shared_ptr<const InstructionSet> make_instruction_set(const std::string& name) {
  InstructionSetFactory factory;
  {
    auto& r = registry();
    std::lock_guard lock(r.mutex);
    auto it = r.factories.find(name);
    if (it == r.factories.end()) throw Fault(FaultKind::Config, "unknown instruction set '" + name + "'");
    factory = it->second;
  }
  auto set = std::make_shared<const InstructionSet>(factory());
  if (set->name() != name) {
    // Registered under an alias; keep the registered name so exported graphs re-import.
    return std::make_shared<const InstructionSet>(
        name, std::vector<Instruction>(set->begin(), set->end()));
  }
  return set;
}

std::vector<std::string> instruction_set_names() {
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  std::vector<std::string> names;
  for (const auto& [name, factory] : r.factories) names.push_back(name);
  return names;
}

}  // namespace tpg
