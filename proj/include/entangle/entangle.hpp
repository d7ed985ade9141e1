#pragma once

#include "entangle/scalar.hpp"
#include "entangle/jordan.hpp"
#include "entangle/freudenthal.hpp"
#include "entangle/fermion.hpp"
#include "entangle/embed.hpp"
#include "entangle/classify.hpp"
#include "entangle/state_io.hpp"
#include "entangle/representatives.hpp"
