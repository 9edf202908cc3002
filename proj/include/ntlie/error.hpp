#pragma once

#include <stdexcept>
#include <string>

namespace ntlie {

enum class Errc {
    EvenCharacteristic,
    NotAssociative,
    NoIdentity,
    SizeTooSmall,
    IdealMismatch,
    RingMismatch,
    Membership,
    FormulaMismatch,
    DimensionMismatch,
    InvalidParams,
    WrongSize,
    CapacityExceeded,
    HypothesisViolation,
    InternalExtractionError,
    TheoremFailure,
    ConfigError,
};

inline const char* errc_name(Errc c) {
    switch (c) {
    case Errc::EvenCharacteristic: return "EvenCharacteristic";
    case Errc::NotAssociative: return "NotAssociative";
    case Errc::NoIdentity: return "NoIdentity";
    case Errc::SizeTooSmall: return "SizeTooSmall";
    case Errc::IdealMismatch: return "IdealMismatch";
    case Errc::RingMismatch: return "RingMismatch";
    case Errc::Membership: return "Membership";
    case Errc::FormulaMismatch: return "FormulaMismatch";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::InvalidParams: return "InvalidParams";
    case Errc::WrongSize: return "WrongSize";
    case Errc::CapacityExceeded: return "CapacityExceeded";
    case Errc::HypothesisViolation: return "HypothesisViolation";
    case Errc::InternalExtractionError: return "InternalExtractionError";
    case Errc::TheoremFailure: return "TheoremFailure";
    case Errc::ConfigError: return "ConfigError";
    }
    return "UnknownError";
}

/// Library-wide exception; carries a machine-readable code so the CLI can
/// map failures onto exit statuses.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& msg)
        : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

} // namespace ntlie
