#pragma once

#include "sepscope/errors.hpp"
#include "sepscope/linalg.hpp"
#include "sepscope/realign.hpp"
#include "sepscope/hs_basis.hpp"
#include "sepscope/random.hpp"
#include "sepscope/states.hpp"
#include "sepscope/fidelity.hpp"
#include "sepscope/criteria.hpp"
#include "sepscope/locc.hpp"
#include "sepscope/io.hpp"
#include "sepscope/sweep.hpp"
#include "sepscope/verify.hpp"
