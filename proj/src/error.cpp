/*
 *  Copyright (C) 2026 The gyrocal Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 */

#include "gyrocal/error.h"

namespace gyrocal
{

const char* ToString(ErrorKind kind)
{
  switch (kind)
  {
    case ErrorKind::InvalidArgument:
      return "invalid argument";
    case ErrorKind::DegenerateGeometry:
      return "degenerate geometry";
    case ErrorKind::NotObservable:
      return "not observable";
    case ErrorKind::SignResolution:
      return "sign resolution";
    case ErrorKind::NotConverged:
      return "not converged";
    case ErrorKind::Config:
      return "config";
    case ErrorKind::Format:
      return "format";
    case ErrorKind::Io:
      return "io";
    case ErrorKind::TooManyFailures:
      return "too many failures";
  }
  return "unknown";
}

} // namespace gyrocal
