#pragma once

#include <stdexcept>
#include <string>

namespace structlens {

// Base of every error raised by the library. `kind()` is a stable tag used in
// trace observations and JSON reports.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define STRUCTLENS_DEFINE_ERROR(Name)                                     \
  class Name : public Error {                                             \
   public:                                                                \
    explicit Name(const std::string& message) : Error(#Name, message) {} \
  }

STRUCTLENS_DEFINE_ERROR(InvalidArgument);
STRUCTLENS_DEFINE_ERROR(IoError);
STRUCTLENS_DEFINE_ERROR(SchemaError);

// chartgen
STRUCTLENS_DEFINE_ERROR(CanvasTooSmall);
STRUCTLENS_DEFINE_ERROR(LayoutOverflow);

// grounding
STRUCTLENS_DEFINE_ERROR(BackendUnavailable);

// tools
STRUCTLENS_DEFINE_ERROR(GroundingMiss);
STRUCTLENS_DEFINE_ERROR(DegenerateRegion);
STRUCTLENS_DEFINE_ERROR(EmptyWindow);
STRUCTLENS_DEFINE_ERROR(AmbiguousColor);
STRUCTLENS_DEFINE_ERROR(EmptyAfterFiltering);
STRUCTLENS_DEFINE_ERROR(CoincidentPoints);
STRUCTLENS_DEFINE_ERROR(DegenerateLine);
STRUCTLENS_DEFINE_ERROR(MathDomain);

// workflow
STRUCTLENS_DEFINE_ERROR(UnknownImageId);
STRUCTLENS_DEFINE_ERROR(ScriptExhausted);

#undef STRUCTLENS_DEFINE_ERROR

// Unparseable model output; keeps the offending text for audit.
class MalformedResponse : public Error {
 public:
  MalformedResponse(const std::string& message, std::string raw_text)
      : Error("MalformedResponse", message), raw_text_(std::move(raw_text)) {}

  const std::string& raw_text() const noexcept { return raw_text_; }

 private:
  std::string raw_text_;
};

// Expression syntax error at a byte offset into the source.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error("ParseError", message + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace structlens
