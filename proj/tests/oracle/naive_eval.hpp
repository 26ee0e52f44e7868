#pragma once

// Deliberately naive program evaluator used as an oracle for the program
// engine. It shares no code with the library beyond the plain data types
// (Program, Line, Address, StateSnapshot buffers) and re-derives operand
// addressing, widening and instruction semantics from first principles.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tpg/data_source.hpp"
#include "tpg/program.hpp"

namespace oracle {

enum class Kind { F64, I64, I8 };
enum class Form { Scalar, Vector, Matrix };

struct Operand {
  Kind kind;
  Form form;
  std::uint32_t rows = 1;  // matrix height
  std::uint32_t cols = 1;  // vector length or matrix width
};

struct Source {
  Kind kind;
  std::uint32_t rows;
  std::uint32_t cols;
  bool grid;
  std::vector<double> values;  // every element widened to double, row-major
};

/// Instruction semantics over widened element values.
struct Op {
  std::string name;
  std::vector<Operand> signature;
  std::function<double(const std::vector<std::vector<double>>&)> fn;
};

/// Registers (source 0) are built by the evaluator itself.
double run(const std::vector<Op>& ops, std::size_t register_count, const tpg::Program& program,
           const std::vector<Source>& state);

/// Widens a library snapshot into oracle sources, element by element.
std::vector<Source> from_snapshot(const tpg::StateSnapshot& snapshot);

std::vector<Op> simple_ops();
std::vector<Op> complex_ops();

}  // namespace oracle
