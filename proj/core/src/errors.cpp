#include "choreo/errors.hpp"

#include <sstream>

namespace choreo {

namespace {

std::string describe_collision(double distance, double floor) {
  std::ostringstream os;
  os << "mutual distance " << distance << " fell below collision floor " << floor;
  return os.str();
}

std::string describe_flight_collision(double time, double distance) {
  std::ostringstream os;
  os << "bodies came within " << distance << " at s = " << time;
  return os.str();
}

}  // namespace

CollisionDetected::CollisionDetected(double distance, double floor)
    : Error("CollisionDetected", describe_collision(distance, floor)), distance_(distance) {}

CollisionDuringIntegration::CollisionDuringIntegration(double time, double distance)
    : Error("CollisionDuringIntegration", describe_flight_collision(time, distance)), time_(time) {}

}  // namespace choreo
