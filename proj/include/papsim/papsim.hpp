#pragma once

#include "papsim/analytic_model.hpp"
#include "papsim/backoff_policy.hpp"
#include "papsim/dcf_mac.hpp"
#include "papsim/errors.hpp"
#include "papsim/event_scheduler.hpp"
#include "papsim/frame.hpp"
#include "papsim/metrics.hpp"
#include "papsim/pap_control.hpp"
#include "papsim/radio_medium.hpp"
#include "papsim/rng.hpp"
#include "papsim/scenario.hpp"
#include "papsim/sim_time.hpp"
#include "papsim/voice_traffic.hpp"
