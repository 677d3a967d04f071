#pragma once

#include "charform/error.hpp"
#include "charform/decision.hpp"
#include "charform/gf2k.hpp"
#include "charform/poly.hpp"
#include "charform/field.hpp"
#include "charform/matrix.hpp"
#include "charform/quadform.hpp"
#include "charform/isotropy.hpp"
#include "charform/quad_ext.hpp"
#include "charform/quaternion.hpp"
#include "charform/algebra.hpp"
#include "charform/symmetric.hpp"
#include "charform/pfister.hpp"
#include "charform/verify.hpp"
#include "charform/json_io.hpp"
