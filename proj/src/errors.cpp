#include "augsindy/errors.hpp"

namespace augsindy {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Schema: return "schema";
        case ErrorKind::Parse: return "parse";
        case ErrorKind::Data: return "data";
        case ErrorKind::Spec: return "spec";
        case ErrorKind::Parameter: return "parameter";
        case ErrorKind::BlowUp: return "blow-up";
        case ErrorKind::Coverage: return "coverage";
        case ErrorKind::Shape: return "shape";
        case ErrorKind::Collision: return "collision";
        case ErrorKind::InsufficientData: return "insufficient-data";
        case ErrorKind::Config: return "config";
        case ErrorKind::Alignment: return "alignment";
        case ErrorKind::UndefinedMetric: return "undefined-metric";
        case ErrorKind::Io: return "io";
    }
    return "unknown";
}

}  // namespace augsindy
