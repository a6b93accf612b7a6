#include "dff/error.hpp"

namespace dff {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::MalformedContainer: return "MalformedContainer";
    case Errc::UnsupportedFormat: return "UnsupportedFormat";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::NumberOutOfRange: return "NumberOutOfRange";
    case Errc::AllSilent: return "AllSilent";
    case Errc::PadOutOfRange: return "PadOutOfRange";
    case Errc::SpanOutOfRange: return "SpanOutOfRange";
    case Errc::OverlappingSpans: return "OverlappingSpans";
    case Errc::EmptyManifest: return "EmptyManifest";
    case Errc::ValCountTooLarge: return "ValCountTooLarge";
    case Errc::MalformedLine: return "MalformedLine";
    case Errc::SignalTooShort: return "SignalTooShort";
    case Errc::NonFiniteSample: return "NonFiniteSample";
    case Errc::GridTooSmall: return "GridTooSmall";
    case Errc::TooFewVectors: return "TooFewVectors";
    case Errc::EmptyQuerySet: return "EmptyQuerySet";
    case Errc::MissingGroundTruth: return "MissingGroundTruth";
    case Errc::KTooLarge: return "KTooLarge";
    case Errc::BinOutOfRange: return "BinOutOfRange";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace dff
