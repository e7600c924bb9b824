#ifndef DASEG_ERROR_H_
#define DASEG_ERROR_H_

#include <stdexcept>
#include <string>

namespace daseg {

// Domain error: bad input data, inconsistent files, contract violations on
// user-supplied artifacts. The CLI maps it to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace daseg

#endif  // DASEG_ERROR_H_
