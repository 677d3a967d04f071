#pragma once

#include <string>

namespace charform {

/// Three-valued answer of a decision procedure. Unknown means the procedure ran out of budget
/// or has no complete method for the field; it is never a disguised "false".
enum class Decision { True, False, Unknown };

inline Decision decided(bool b) { return b ? Decision::True : Decision::False; }

inline const char* to_string(Decision d) {
  switch (d) {
    case Decision::True: return "true";
    case Decision::False: return "false";
    case Decision::Unknown: return "unknown";
  }
  return "unknown";
}

}  // namespace charform
