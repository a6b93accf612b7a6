#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dff {

enum class Errc {
  MalformedContainer,
  UnsupportedFormat,
  InvalidArgument,
  NumberOutOfRange,
  AllSilent,
  PadOutOfRange,
  SpanOutOfRange,
  OverlappingSpans,
  EmptyManifest,
  ValCountTooLarge,
  MalformedLine,
  SignalTooShort,
  NonFiniteSample,
  GridTooSmall,
  TooFewVectors,
  EmptyQuerySet,
  MissingGroundTruth,
  KTooLarge,
  BinOutOfRange,
  Io,
};

std::string_view errc_name(Errc code);

// Every failure raised by the library carries one of the codes above so the
// CLI and tests can dispatch on it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code), message_(what) {}

  Errc code() const noexcept { return code_; }
  // The message without the code prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  Errc code_;
  std::string message_;
};

}  // namespace dff
