#pragma once

#include <stdexcept>
#include <string>

namespace cga {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
};

#define CGA_DEFINE_ERROR(Name)                                     \
  class Name : public Error {                                      \
   public:                                                         \
    using Error::Error;                                            \
    const char* kind() const noexcept override { return #Name; }  \
  };

// algebra
CGA_DEFINE_ERROR(NotInvertible)
CGA_DEFINE_ERROR(NotUnitVersor)
CGA_DEFINE_ERROR(LogBranchSingularity)

// primitives
CGA_DEFINE_ERROR(DegeneratePoint)
CGA_DEFINE_ERROR(DegenerateConfiguration)
CGA_DEFINE_ERROR(DegeneratePrimitive)
CGA_DEFINE_ERROR(ImaginaryRadius)

// robot model
CGA_DEFINE_ERROR(DuplicateName)
CGA_DEFINE_ERROR(DanglingReference)
CGA_DEFINE_ERROR(CycleDetected)
CGA_DEFINE_ERROR(JointLimitViolation)
CGA_DEFINE_ERROR(SingularInertia)
CGA_DEFINE_ERROR(DimensionMismatch)

// optimisation
CGA_DEFINE_ERROR(LinearSolveFailure)

// model files
CGA_DEFINE_ERROR(SchemaError)
CGA_DEFINE_ERROR(NoSuchJoint)
CGA_DEFINE_ERROR(NonSerialChain)
CGA_DEFINE_ERROR(UnsupportedJointType)
CGA_DEFINE_ERROR(MalformedURDF)
CGA_DEFINE_ERROR(IOError)

#undef CGA_DEFINE_ERROR

}  // namespace cga
