#pragma once

#include <stdexcept>
#include <string>

namespace anisospec {

// Every library failure derives from Error; the kind string is stable and
// ends up in reports and CLI messages.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define ANISOSPEC_ERROR(Name)                                  \
  class Name : public Error {                                  \
   public:                                                     \
    explicit Name(const std::string& what) : Error(#Name, what) {} \
  }

ANISOSPEC_ERROR(ClassificationAmbiguous);
ANISOSPEC_ERROR(DominationFailed);
ANISOSPEC_ERROR(DegenerateBody);
ANISOSPEC_ERROR(OriginNotInterior);
ANISOSPEC_ERROR(InvalidAnisotropy);
ANISOSPEC_ERROR(InvalidRing);
ANISOSPEC_ERROR(InvalidParams);
ANISOSPEC_ERROR(InvalidExponent);
ANISOSPEC_ERROR(InvalidLength);
ANISOSPEC_ERROR(NotDegenerate);
ANISOSPEC_ERROR(ZeroAnisotropy);
ANISOSPEC_ERROR(NotConvex);
ANISOSPEC_ERROR(MeshFailure);
ANISOSPEC_ERROR(ZeroField);
ANISOSPEC_ERROR(NoConvergence);
ANISOSPEC_ERROR(SingularStiffness);
ANISOSPEC_ERROR(ParseError);

#undef ANISOSPEC_ERROR

}  // namespace anisospec
