#include "idmft/system.hpp"

namespace idmft {

const std::string& builtin_ccpvdz() {
  static const std::string text = R"(!  cc-pVDZ
****
H     0
S   4   1.00
     13.0100000              0.0196850
      1.9620000              0.1379770
      0.4446000              0.4781480
      0.1220000              0.5012400
S   1   1.00
      0.1220000              1.0000000
P   1   1.00
      0.7270000              1.0000000
****
He     0
S   4   1.00
     38.3600000              0.0238090
      5.7700000              0.1548910
      1.2400000              0.4699870
      0.2976000              0.5130270
S   1   1.00
      0.2976000              1.0000000
P   1   1.00
      1.2750000              1.0000000
****
)";
  return text;
}

} // namespace idmft
