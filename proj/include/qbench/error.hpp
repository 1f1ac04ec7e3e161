#pragma once

#include <stdexcept>
#include <string>

namespace qbench {

/// Base class for all errors raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument violates an operation's precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A circuit asks for something the target backend cannot do.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

/// A job did not finish in time. The handle can be used to fetch it later.
class TimeoutError : public Error {
 public:
  TimeoutError(const std::string& what, std::string job_id)
      : Error(what), job_id_(std::move(job_id)) {}
  const std::string& job_id() const noexcept { return job_id_; }

 private:
  std::string job_id_;
};

class BackendError : public Error {
 public:
  using Error::Error;
};

}  // namespace qbench
