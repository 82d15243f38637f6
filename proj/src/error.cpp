#include "sosgap/error.hpp"

namespace sosgap {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::InvalidSupport: return "InvalidSupport";
    case ErrorKind::RademacherWithSignal: return "RademacherWithSignal";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::MissingValue: return "MissingValue";
    case ErrorKind::NotBinary: return "NotBinary";
    case ErrorKind::CertificateUndefined: return "CertificateUndefined";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::EigFailure: return "EigFailure";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace sosgap
