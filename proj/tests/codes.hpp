#pragma once

// Hand-built motioncodes for aggregation and rendering tests.

#include "motionscript/aggregate.hpp"
#include "motionscript/motioncode.hpp"

#include <cstdlib>
#include <string>

namespace codes {

using namespace motionscript;

inline Motioncode mk(const std::string& instance, int ts, int te, int spatial,
                     VelocityClass v = VelocityClass::moderate, std::size_t index = 0) {
  Motioncode c;
  c.instance = parse_instance(instance);
  c.family = *family_of(c.instance.kind);
  c.instance_index = index;
  c.t_start = ts;
  c.t_end = te;
  c.spatial = spatial;
  c.velocity = spatial == 0 ? 0.0 : std::abs(spatial) / static_cast<double>(te - ts);
  c.velocity_class = v;
  if (c.family != Family::spatial_relation) c.intensity = IntensityEdges{}.classify(std::abs(spatial));
  c.direction_label = direction_label(c.family, c.instance, spatial > 0 ? 1 : -1);
  return c;
}

inline AggregateMember member(const Motioncode& code, int bin, int subject, int counterpart = -1) {
  AggregateMember m;
  m.code = code;
  m.bin = bin;
  m.subject.joint = subject;
  m.focus = {subject};
  m.counterpart = counterpart;
  m.label = code.direction_label;
  return m;
}

inline Clause clause(const Motioncode& code, int bin, int subject, int counterpart = -1) {
  return singleton_clause(member(code, bin, subject, counterpart), SkeletonSpec::canonical());
}

}  // namespace codes
