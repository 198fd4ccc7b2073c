#pragma once

#include "trifermi/errors.hpp"
#include "trifermi/linalg.hpp"
#include "trifermi/states.hpp"
#include "trifermi/nifg.hpp"
#include "trifermi/witnesses.hpp"
#include "trifermi/lp.hpp"
#include "trifermi/scan.hpp"
