#include "rlbench/tasks/registry.hpp"

#include <sstream>
#include <stdexcept>

#include "rlbench/tasks/acrobot.hpp"
#include "rlbench/tasks/cartpole.hpp"
#include "rlbench/tasks/double_pendulum.hpp"
#include "rlbench/tasks/mountain_car.hpp"

namespace rlbench {

const std::vector<std::string>& task_names() {
  static const std::vector<std::string> names = {
      "cartpole_balance", "cartpole_swingup", "mountain_car", "acrobot",
      "double_pendulum"};
  return names;
}

std::unique_ptr<Env> make_task(const std::string& name) {
  if (name == "cartpole_balance")
    return std::make_unique<CartPole>(CartPole::Mode::kBalance);
  if (name == "cartpole_swingup")
    return std::make_unique<CartPole>(CartPole::Mode::kSwingUp);
  if (name == "mountain_car") return std::make_unique<MountainCar>();
  if (name == "acrobot") return std::make_unique<Acrobot>();
  if (name == "double_pendulum") return std::make_unique<DoublePendulum>();

  std::ostringstream msg;
  msg << "unknown task '" << name << "'; valid tasks:";
  for (const auto& n : task_names()) msg << " " << n;
  throw std::invalid_argument(msg.str());
}

std::vector<ParamRange> default_sysid_ranges(const std::string& task_name) {
  if (task_name == "cartpole_balance" || task_name == "cartpole_swingup")
    return {{"pole_length", 0.5, 1.5}};
  if (task_name == "mountain_car") return {{"valley_width", 0.75, 1.25}};
  if (task_name == "acrobot")
    return {{"length1", 0.5, 1.5}, {"length2", 0.5, 1.5}};
  if (task_name == "double_pendulum")
    return {{"length1", 0.83, 1.67}, {"length2", 0.83, 1.67}};
  throw std::invalid_argument("no system-identification ranges for task " +
                              task_name);
}

}  // namespace rlbench
