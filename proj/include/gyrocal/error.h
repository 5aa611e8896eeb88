/*
 *  Copyright (C) 2026 The gyrocal Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <stdexcept>
#include <string>

namespace gyrocal
{

enum class ErrorKind
{
  InvalidArgument,    // violated precondition on in-memory data
  DegenerateGeometry, // design matrix or pose set cannot determine the parameters
  NotObservable,      // rotation not visible at some pose
  SignResolution,     // scale factors of mixed sign
  NotConverged,       // iterative fit ran out of iterations
  Config,             // bad config file or value
  Format,             // malformed session / params file
  Io,                 // file system failure
  TooManyFailures,    // Monte-Carlo battery exceeded its failure budget
};

const char* ToString(ErrorKind kind);

class Error : public std::runtime_error
{
public:
  Error(ErrorKind kind, const std::string& message) : std::runtime_error(message), m_kind(kind) {}

  ErrorKind Kind() const { return m_kind; }

private:
  ErrorKind m_kind;
};

} // namespace gyrocal
