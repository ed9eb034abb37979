#include "qdyn/constants.hpp"

#include <stdexcept>

namespace qdyn {

void Constants::validate() const {
  if (!(hbar > 0.0)) throw std::invalid_argument("Constants: hbar must be positive");
  if (!(mass > 0.0)) throw std::invalid_argument("Constants: mass must be positive");
  if (!(charge > 0.0)) throw std::invalid_argument("Constants: charge must be positive");
  if (!(c_light > 0.0)) throw std::invalid_argument("Constants: c_light must be positive");
}

}  // namespace qdyn
