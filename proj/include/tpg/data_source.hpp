#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "tpg/fault.hpp"

namespace tpg {

enum class ElementKind : std::uint8_t { Float64, Int64, Int8 };

std::string_view to_string(ElementKind kind);
std::optional<ElementKind> parse_element_kind(std::string_view text);

template <typename T>
struct element_kind_of;
template <>
struct element_kind_of<double> : std::integral_constant<ElementKind, ElementKind::Float64> {};
template <>
struct element_kind_of<std::int64_t> : std::integral_constant<ElementKind, ElementKind::Int64> {};
template <>
struct element_kind_of<std::int8_t> : std::integral_constant<ElementKind, ElementKind::Int8> {};

/// True when values of `from` can be served as `to` without loss: integers
/// widen to float64, int8 widens to int64. Narrowing is never allowed.
constexpr bool can_convert(ElementKind from, ElementKind to) {
  return from == to || to == ElementKind::Float64 ||
         (from == ElementKind::Int8 && to == ElementKind::Int64);
}

enum class ShapeKind : std::uint8_t { Scalar, Vector, Matrix };

/// Element kind plus shape of an instruction operand. Equality is structural.
class OperandType {
 public:
  static OperandType scalar(ElementKind kind) { return {kind, ShapeKind::Scalar, 1, 1}; }
  static OperandType vector(ElementKind kind, std::uint32_t size);
  static OperandType matrix(ElementKind kind, std::uint32_t rows, std::uint32_t cols);

  ElementKind kind() const noexcept { return kind_; }
  ShapeKind shape() const noexcept { return shape_; }
  std::uint32_t rows() const noexcept { return rows_; }
  std::uint32_t cols() const noexcept { return cols_; }
  std::size_t element_count() const noexcept { return std::size_t{rows_} * cols_; }

  bool operator==(const OperandType&) const = default;

 private:
  OperandType(ElementKind kind, ShapeKind shape, std::uint32_t rows, std::uint32_t cols)
      : kind_(kind), shape_(shape), rows_(rows), cols_(cols) {}

  ElementKind kind_;
  ShapeKind shape_;
  std::uint32_t rows_;  // 1 for scalars and vectors
  std::uint32_t cols_;  // vector length for vectors
};

/// "float64", "int8[2]", "int8[3][3]".
std::string to_string(const OperandType& type);

enum class Access : std::uint8_t { ReadOnly, ReadWrite };

/// Static description of a data source: what it stores and how it may be
/// addressed. Everything mutation needs to draw valid addresses lives here, so
/// it can be reasoned about without any data attached.
///
/// Locations are flat integers. Scalars and vectors index the linearized
/// native storage. Matrix windows are anchored at their top-left element and
/// must be fully contained; the location is the row-major index of the
/// anchor among all valid anchors. Matrix operands require a two-dimensional
/// source.
struct SourceShape {
  ElementKind kind = ElementKind::Float64;
  std::uint32_t rows = 1;
  std::uint32_t cols = 1;
  bool two_dimensional = false;
  Access access = Access::ReadOnly;

  static SourceShape linear(ElementKind kind, std::uint32_t count, Access access = Access::ReadOnly);
  static SourceShape grid(ElementKind kind, std::uint32_t rows, std::uint32_t cols,
                          Access access = Access::ReadOnly);

  std::size_t native_count() const noexcept { return std::size_t{rows} * cols; }

  /// Number of valid locations for `type`; 0 when the type is never served.
  std::size_t addressable_count(const OperandType& type) const noexcept;

  bool can_provide(const OperandType& type, std::size_t location) const noexcept {
    return location < addressable_count(type);
  }

  /// Location of the matrix window anchored at (row, col), if that window fits.
  std::optional<std::size_t> window_location(const OperandType& type, std::uint32_t row,
                                             std::uint32_t col) const noexcept;

  bool operator==(const SourceShape&) const = default;
};

/// A typed operand value as seen by an instruction. Holds a pointer to
/// `element_count()` contiguous elements of `type().kind()`, row-major for
/// matrices. Only valid while the line that fetched it executes.
class Operand {
 public:
  Operand() : type_(OperandType::scalar(ElementKind::Float64)) {}
  Operand(OperandType type, const void* data) : type_(type), data_(data) {}

  const OperandType& type() const noexcept { return type_; }

  template <typename T>
  std::span<const T> values() const {
    if (element_kind_of<T>::value != type_.kind()) {
      throw Fault(FaultKind::SignatureMismatch,
                  "operand of type " + to_string(type_) + " read with the wrong element type");
    }
    return {static_cast<const T*>(data_), type_.element_count()};
  }

  template <typename T>
  T scalar() const {
    return values<T>()[0];
  }

  /// Element i widened to double, whatever the element kind.
  double as_double(std::size_t i = 0) const noexcept;

 private:
  OperandType type_;
  const void* data_ = nullptr;
};

/// Preallocated storage for operands that need conversion or gathering.
/// Capacity is fixed by reserve(); taking more than reserved is a logic error
/// because earlier operands of the same line still point into the buffers.
class OperandScratch {
 public:
  struct Need {
    std::size_t f64 = 0;
    std::size_t i64 = 0;
    std::size_t i8 = 0;
  };

  void reserve(Need need);
  void clear() noexcept { used_ = {}; }

  double* take_f64(std::size_t n) { return take(f64_, used_.f64, n); }
  std::int64_t* take_i64(std::size_t n) { return take(i64_, used_.i64, n); }
  std::int8_t* take_i8(std::size_t n) { return take(i8_, used_.i8, n); }

 private:
  template <typename T>
  static T* take(std::vector<T>& buffer, std::size_t& used, std::size_t n) {
    if (used + n > buffer.size()) {
      throw Fault(FaultKind::InvalidArgument, "operand scratch exhausted");
    }
    T* out = buffer.data() + used;
    used += n;
    return out;
  }

  std::vector<double> f64_;
  std::vector<std::int64_t> i64_;
  std::vector<std::int8_t> i8_;
  Need used_;
};

/// Non-owning view over the storage of one data source.
class DataSource {
 public:
  DataSource(const SourceShape& shape, std::span<const double> data);
  DataSource(const SourceShape& shape, std::span<const std::int64_t> data);
  DataSource(const SourceShape& shape, std::span<const std::int8_t> data);
  /// Writable float64 view; the shape must declare ReadWrite access.
  DataSource(const SourceShape& shape, std::span<double> data);

  const SourceShape& shape() const noexcept { return shape_; }

  std::size_t addressable_count(const OperandType& type) const noexcept {
    return shape_.addressable_count(type);
  }
  bool can_provide(const OperandType& type, std::size_t location) const noexcept {
    return shape_.can_provide(type, location);
  }

  /// Materializes the operand at `location`. Same-kind contiguous reads point
  /// straight into the source; anything else is converted into `scratch`.
  /// Throws OperandUnavailable when can_provide() is false.
  Operand get_data(const OperandType& type, std::size_t location, OperandScratch& scratch) const;

  /// Throws ReadOnlySource on read-only views, RegisterOutOfRange past the end.
  void set_data(std::size_t location, double value) const;

  /// Raw elements of a float64 source, nullptr for other kinds.
  const double* f64_data() const noexcept {
    return shape_.kind == ElementKind::Float64 ? static_cast<const double*>(data_) : nullptr;
  }

 private:
  SourceShape shape_;
  const void* data_;
  double* writable_ = nullptr;
};

/// Owning storage for one data source. Environments keep their state in
/// these; copying one is how a state snapshot is taken.
class SourceBuffer {
 public:
  explicit SourceBuffer(const SourceShape& shape);

  const SourceShape& shape() const noexcept { return shape_; }

  std::span<double> f64();
  std::span<std::int64_t> i64();
  std::span<std::int8_t> i8();
  std::span<const double> f64() const;
  std::span<const std::int64_t> i64() const;
  std::span<const std::int8_t> i8() const;

  /// Element i widened to double.
  double as_double(std::size_t i) const;

  /// Read-only view, regardless of the declared access mode.
  DataSource view() const;

  bool operator==(const SourceBuffer& other) const;

 private:
  SourceShape shape_;
  std::vector<double> f64_;
  std::vector<std::int64_t> i64_;
  std::vector<std::int8_t> i8_;
};

/// Copy of every state source of an environment at one instant.
using StateSnapshot = std::vector<SourceBuffer>;

/// Program registers. Register 0 holds the program result.
class RegisterFile {
 public:
  static constexpr std::size_t kResultRegister = 0;
  static constexpr std::size_t kDefaultCount = 8;

  explicit RegisterFile(std::size_t count = kDefaultCount);

  RegisterFile(const RegisterFile& other);
  RegisterFile& operator=(const RegisterFile& other);

  std::size_t size() const noexcept { return values_.size(); }

  void reset() noexcept;
  void set(std::size_t index, double value);
  double get(std::size_t index) const;
  double result() const noexcept { return values_[kResultRegister]; }
  /// Unchecked storage, for the program engine.
  double* data() noexcept { return values_.data(); }

  /// Read-write view; stays valid for the lifetime of this register file.
  const DataSource& source() const noexcept { return source_; }

  static SourceShape shape_for(std::size_t count) {
    return SourceShape::linear(ElementKind::Float64, static_cast<std::uint32_t>(count),
                               Access::ReadWrite);
  }

 private:
  std::vector<double> values_;
  DataSource source_;
};

}  // namespace tpg
