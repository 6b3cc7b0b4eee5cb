#pragma once

#include <stdexcept>
#include <string>

namespace curvex {

enum class ErrorKind {
    InvalidParity,
    IllConditioned,
    IdenticallyZero,
    DegeneratePoint,
    NotAntiConvex,
    LineCurve,
    AxiomViolation,
    PreconditionFailed,
    NoConvergence,
    EmptyY,
    NumericalTie,
    DegenerateChord,
    SelfIntersection,
    NotConvex,
    CertificateFailed,
    ParseError,
    EmptyIntersection,
    SingularSystem,
    SearchFailed
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidParity: return "InvalidParity";
        case ErrorKind::IllConditioned: return "IllConditioned";
        case ErrorKind::IdenticallyZero: return "IdenticallyZero";
        case ErrorKind::DegeneratePoint: return "DegeneratePoint";
        case ErrorKind::NotAntiConvex: return "NotAntiConvex";
        case ErrorKind::LineCurve: return "LineCurve";
        case ErrorKind::AxiomViolation: return "AxiomViolation";
        case ErrorKind::PreconditionFailed: return "PreconditionFailed";
        case ErrorKind::NoConvergence: return "NoConvergence";
        case ErrorKind::EmptyY: return "EmptyY";
        case ErrorKind::NumericalTie: return "NumericalTie";
        case ErrorKind::DegenerateChord: return "DegenerateChord";
        case ErrorKind::SelfIntersection: return "SelfIntersection";
        case ErrorKind::NotConvex: return "NotConvex";
        case ErrorKind::CertificateFailed: return "CertificateFailed";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::EmptyIntersection: return "EmptyIntersection";
        case ErrorKind::SingularSystem: return "SingularSystem";
        case ErrorKind::SearchFailed: return "SearchFailed";
    }
    return "Unknown";
}

// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// Shared numerical thresholds. Every object that makes a decision keeps a copy,
// so the CLI can override them per run.
struct Tolerances {
    double angle = 1e-10;    // two circle points are the same point
    double group = 1e-7;     // contact points closer than this form one component
    double contact = 1e-8;   // residual below which a point counts as a contact
    double root = 1e-12;     // root refinement target
    double norm = 1e-9;      // smallest admissible |F|
    double tangent = 1e-6;   // angle below which a limiting circle is the tangent one
    double search = 1e-11;   // interval length at which clean searches stop
};

}  // namespace curvex
