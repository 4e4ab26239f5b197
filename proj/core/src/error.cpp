// SPDX-License-Identifier: Apache-2.0

#include "wharray/error.hpp"

namespace wharray
{

int exit_code_for(const std::exception &e)
{
  if (dynamic_cast<const ValidationError *>(&e))
    return 2;
  if (dynamic_cast<const ResonanceError *>(&e))
    return 3;
  if (dynamic_cast<const NumericalError *>(&e))
    return 4;
  return 1;
}

} // namespace wharray
