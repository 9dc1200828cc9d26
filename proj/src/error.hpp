// SPDX-License-Identifier: Apache-2.0

#ifndef PVMW_ERROR_HPP_
#define PVMW_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace pvmw {

enum class Errc {
  kInvalidArgument,
  kParse,
  kDuplicateName,
  kReservedPrefix,
  kUnsupportedType,
  kBindFailure,
  kUnreachable,
  kTimeout,
  kIo,
  kAccessDenied,
  kTypeMismatch,
  kDisconnected,
  kOverflow,
  kInsufficientData,
  kInternal,
};

const char* errc_name(Errc e);

class PvError : public std::runtime_error {
 public:
  PvError(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace pvmw

#endif  // PVMW_ERROR_HPP_
