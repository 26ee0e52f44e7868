#include "tpg/data_source.hpp"

#include <algorithm>
#include <cstring>

namespace tpg {

std::string_view to_string(ElementKind kind) {
  switch (kind) {
    case ElementKind::Float64: return "float64";
    case ElementKind::Int64: return "int64";
    case ElementKind::Int8: return "int8";
  }
  return "?";
}

std::optional<ElementKind> parse_element_kind(std::string_view text) {
  if (text == "float64") return ElementKind::Float64;
  if (text == "int64") return ElementKind::Int64;
  if (text == "int8") return ElementKind::Int8;
  return std::nullopt;
}

OperandType OperandType::vector(ElementKind kind, std::uint32_t size) {
  if (size == 0) throw Fault(FaultKind::InvalidArgument, "vector operand of size 0");
  return {kind, ShapeKind::Vector, 1, size};
}

OperandType OperandType::matrix(ElementKind kind, std::uint32_t rows, std::uint32_t cols) {
  if (rows == 0 || cols == 0) throw Fault(FaultKind::InvalidArgument, "matrix operand with a 0 dimension");
  return {kind, ShapeKind::Matrix, rows, cols};
}

std::string to_string(const OperandType& type) {
  std::string out(to_string(type.kind()));
  switch (type.shape()) {
    case ShapeKind::Scalar: break;
    case ShapeKind::Vector: out += "[" + std::to_string(type.cols()) + "]"; break;
    case ShapeKind::Matrix:
      out += "[" + std::to_string(type.rows()) + "][" + std::to_string(type.cols()) + "]";
      break;
  }
  return out;
}

SourceShape SourceShape::linear(ElementKind kind, std::uint32_t count, Access access) {
  if (count == 0) throw Fault(FaultKind::InvalidArgument, "data source with no elements");
  return {kind, 1, count, false, access};
}

SourceShape SourceShape::grid(ElementKind kind, std::uint32_t rows, std::uint32_t cols, Access access) {
  if (rows == 0 || cols == 0) throw Fault(FaultKind::InvalidArgument, "data source with a 0 dimension");
  return {kind, rows, cols, true, access};
}

std::size_t SourceShape::addressable_count(const OperandType& type) const noexcept {
  if (!can_convert(kind, type.kind())) return 0;
  const std::size_t count = native_count();
  switch (type.shape()) {
    case ShapeKind::Scalar: return count;
    case ShapeKind::Vector: return count >= type.cols() ? count - type.cols() + 1 : 0;
    case ShapeKind::Matrix:
      if (!two_dimensional || type.rows() > rows || type.cols() > cols) return 0;
      return std::size_t{rows - type.rows() + 1} * (cols - type.cols() + 1);
  }
  return 0;
}

std::optional<std::size_t> SourceShape::window_location(const OperandType& type, std::uint32_t row,
                                                        std::uint32_t col) const noexcept {
  if (type.shape() != ShapeKind::Matrix || addressable_count(type) == 0) return std::nullopt;
  const std::uint32_t anchor_rows = rows - type.rows() + 1;
  const std::uint32_t anchor_cols = cols - type.cols() + 1;
  if (row >= anchor_rows || col >= anchor_cols) return std::nullopt;
  return std::size_t{row} * anchor_cols + col;
}

double Operand::as_double(std::size_t i) const noexcept {
  switch (type_.kind()) {
    case ElementKind::Float64: return static_cast<const double*>(data_)[i];
    case ElementKind::Int64: return static_cast<double>(static_cast<const std::int64_t*>(data_)[i]);
    case ElementKind::Int8: return static_cast<double>(static_cast<const std::int8_t*>(data_)[i]);
  }
  return 0.0;
}

void OperandScratch::reserve(Need need) {
  if (f64_.size() < need.f64) f64_.resize(need.f64);
  if (i64_.size() < need.i64) i64_.resize(need.i64);
  if (i8_.size() < need.i8) i8_.resize(need.i8);
  used_ = {};
}

DataSource::DataSource(const SourceShape& shape, std::span<const double> data)
    : shape_(shape), data_(data.data()) {
  if (shape.kind != ElementKind::Float64 || data.size() != shape.native_count()) {
    throw Fault(FaultKind::InvalidArgument, "float64 storage does not match the source shape");
  }
}

DataSource::DataSource(const SourceShape& shape, std::span<const std::int64_t> data)
    : shape_(shape), data_(data.data()) {
  if (shape.kind != ElementKind::Int64 || data.size() != shape.native_count()) {
    throw Fault(FaultKind::InvalidArgument, "int64 storage does not match the source shape");
  }
}

DataSource::DataSource(const SourceShape& shape, std::span<const std::int8_t> data)
    : shape_(shape), data_(data.data()) {
  if (shape.kind != ElementKind::Int8 || data.size() != shape.native_count()) {
    throw Fault(FaultKind::InvalidArgument, "int8 storage does not match the source shape");
  }
}

DataSource::DataSource(const SourceShape& shape, std::span<double> data)
    : DataSource(shape, std::span<const double>(data)) {
  if (shape.access != Access::ReadWrite) {
    throw Fault(FaultKind::InvalidArgument, "writable view over a read-only source shape");
  }
  writable_ = data.data();
}

namespace {

template <typename From, typename To>
void gather(const From* src, To* dst, const SourceShape& shape, const OperandType& type,
            std::size_t first) {
  if (type.shape() != ShapeKind::Matrix) {
    for (std::size_t i = 0; i < type.element_count(); ++i) dst[i] = static_cast<To>(src[first + i]);
    return;
  }
  for (std::uint32_t r = 0; r < type.rows(); ++r) {
    const From* row = src + first + std::size_t{r} * shape.cols;
    for (std::uint32_t c = 0; c < type.cols(); ++c) *dst++ = static_cast<To>(row[c]);
  }
}

template <typename To>
void gather_from(const void* data, ElementKind native, To* dst, const SourceShape& shape,
                 const OperandType& type, std::size_t first) {
  switch (native) {
    case ElementKind::Float64: gather(static_cast<const double*>(data), dst, shape, type, first); break;
    case ElementKind::Int64: gather(static_cast<const std::int64_t*>(data), dst, shape, type, first); break;
    case ElementKind::Int8: gather(static_cast<const std::int8_t*>(data), dst, shape, type, first); break;
  }
}

std::size_t element_size(ElementKind kind) {
  switch (kind) {
    case ElementKind::Float64: return sizeof(double);
    case ElementKind::Int64: return sizeof(std::int64_t);
    case ElementKind::Int8: return sizeof(std::int8_t);
  }
  return 1;
}

}  // namespace

Operand DataSource::get_data(const OperandType& type, std::size_t location, OperandScratch& scratch) const {
  if (!can_provide(type, location)) {
    throw Fault(FaultKind::OperandUnavailable,
                to_string(type) + " at location " + std::to_string(location));
  }

  // Linear index of the first element.
  std::size_t first = location;
  bool contiguous = true;
  if (type.shape() == ShapeKind::Matrix) {
    const std::size_t anchor_cols = shape_.cols - type.cols() + 1;
    first = (location / anchor_cols) * shape_.cols + location % anchor_cols;
    contiguous = type.rows() == 1 || type.cols() == shape_.cols;
  }

  if (type.kind() == shape_.kind && contiguous) {
    return Operand(type, static_cast<const char*>(data_) + first * element_size(shape_.kind));
  }

  const std::size_t n = type.element_count();
  switch (type.kind()) {
    case ElementKind::Float64: {
      double* out = scratch.take_f64(n);
      gather_from(data_, shape_.kind, out, shape_, type, first);
      return Operand(type, out);
    }
    case ElementKind::Int64: {
      std::int64_t* out = scratch.take_i64(n);
      gather_from(data_, shape_.kind, out, shape_, type, first);
      return Operand(type, out);
    }
    case ElementKind::Int8: {
      std::int8_t* out = scratch.take_i8(n);
      gather_from(data_, shape_.kind, out, shape_, type, first);
      return Operand(type, out);
    }
  }
  throw Fault(FaultKind::OperandUnavailable, "unknown element kind");
}

void DataSource::set_data(std::size_t location, double value) const {
  if (writable_ == nullptr) throw Fault(FaultKind::ReadOnlySource, "write to a read-only data source");
  if (location >= shape_.native_count()) {
    throw Fault(FaultKind::RegisterOutOfRange,
                "index " + std::to_string(location) + " of " + std::to_string(shape_.native_count()));
  }
  writable_[location] = value;
}

SourceBuffer::SourceBuffer(const SourceShape& shape) : shape_(shape) {
  switch (shape.kind) {
    case ElementKind::Float64: f64_.assign(shape.native_count(), 0.0); break;
    case ElementKind::Int64: i64_.assign(shape.native_count(), 0); break;
    case ElementKind::Int8: i8_.assign(shape.native_count(), 0); break;
  }
}

namespace {
[[noreturn]] void wrong_kind(const SourceShape& shape, ElementKind requested) {
  throw Fault(FaultKind::InvalidArgument, std::string("source stores ") + std::string(to_string(shape.kind)) +
                                              ", not " + std::string(to_string(requested)));
}
}  // namespace

std::span<double> SourceBuffer::f64() {
  if (shape_.kind != ElementKind::Float64) wrong_kind(shape_, ElementKind::Float64);
  return f64_;
}
std::span<std::int64_t> SourceBuffer::i64() {
  if (shape_.kind != ElementKind::Int64) wrong_kind(shape_, ElementKind::Int64);
  return i64_;
}
std::span<std::int8_t> SourceBuffer::i8() {
  if (shape_.kind != ElementKind::Int8) wrong_kind(shape_, ElementKind::Int8);
  return i8_;
}
std::span<const double> SourceBuffer::f64() const {
  if (shape_.kind != ElementKind::Float64) wrong_kind(shape_, ElementKind::Float64);
  return f64_;
}
std::span<const std::int64_t> SourceBuffer::i64() const {
  if (shape_.kind != ElementKind::Int64) wrong_kind(shape_, ElementKind::Int64);
  return i64_;
}
std::span<const std::int8_t> SourceBuffer::i8() const {
  if (shape_.kind != ElementKind::Int8) wrong_kind(shape_, ElementKind::Int8);
  return i8_;
}

double SourceBuffer::as_double(std::size_t i) const {
  switch (shape_.kind) {
    case ElementKind::Float64: return f64_.at(i);
    case ElementKind::Int64: return static_cast<double>(i64_.at(i));
    case ElementKind::Int8: return static_cast<double>(i8_.at(i));
  }
  return 0.0;
}

DataSource SourceBuffer::view() const {
  SourceShape ro = shape_;
  ro.access = Access::ReadOnly;
  switch (shape_.kind) {
    case ElementKind::Float64: return DataSource(ro, std::span<const double>(f64_));
    case ElementKind::Int64: return DataSource(ro, std::span<const std::int64_t>(i64_));
    case ElementKind::Int8: return DataSource(ro, std::span<const std::int8_t>(i8_));
  }
  throw Fault(FaultKind::InvalidArgument, "unknown element kind");
}

bool SourceBuffer::operator==(const SourceBuffer& other) const {
  if (!(shape_ == other.shape_)) return false;
  // Bitwise for floats, so NaN snapshots compare equal to their copies.
  return f64_.size() == other.f64_.size() &&
         std::memcmp(f64_.data(), other.f64_.data(), f64_.size() * sizeof(double)) == 0 &&
         i64_ == other.i64_ && i8_ == other.i8_;
}

RegisterFile::RegisterFile(std::size_t count)
    : values_(count, 0.0), source_(shape_for(count), std::span<double>(values_)) {
  if (count == 0) throw Fault(FaultKind::InvalidArgument, "register file with no registers");
}

RegisterFile::RegisterFile(const RegisterFile& other)
    : values_(other.values_), source_(shape_for(values_.size()), std::span<double>(values_)) {}

RegisterFile& RegisterFile::operator=(const RegisterFile& other) {
  if (this != &other) {
    values_ = other.values_;
    source_ = DataSource(shape_for(values_.size()), std::span<double>(values_));
  }
  return *this;
}

void RegisterFile::reset() noexcept { std::fill(values_.begin(), values_.end(), 0.0); }

void RegisterFile::set(std::size_t index, double value) {
  if (index >= values_.size()) {
    throw Fault(FaultKind::RegisterOutOfRange,
                "register " + std::to_string(index) + " of " + std::to_string(values_.size()));
  }
  values_[index] = value;
}

double RegisterFile::get(std::size_t index) const {
  if (index >= values_.size()) {
    throw Fault(FaultKind::RegisterOutOfRange,
                "register " + std::to_string(index) + " of " + std::to_string(values_.size()));
  }
  return values_[index];
}

}  // namespace tpg
