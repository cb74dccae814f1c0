"""Ordinal term systems over arbitrary base orders, a true-stage jump
calculus on strings / trees / streams, and the monotone constructions that
turn jump trees into strictly descending term sequences."""

from .core import (EQ, GT, LT, ContractViolation, DomainError, OrderHandle,
                   StreamHandle, Tree, all_strings, as_string, cmp_name,
                   decode_string, empty_tree, encode_string, fin_order,
                   full_tree, kb_compare, kb_descending_to_path,
                   kb_tree_order, last_singleton, nat_order, order_restrict,
                   prefix_of, prefix_tree, tree_from_json, tree_restrict,
                   tree_to_json, EMPTY_ORDER)
from .machine import (DiagonalSemantics, DivergeSemantics, Instr, Program,
                      TableSemantics, ThresholdSemantics, UniversalSemantics,
                      RunOutcome, decode_program, diag_converges,
                      encode_instruction, geometric_semantics, mu_stage,
                      program_index, run, semantics_from_json,
                      semantics_from_selector)
from .notation import (ORD_OMEGA, ORD_ONE, ORD_ZERO, OrdNotation,
                       format_ordinal, fundamental_seq, omega_power,
                       ord_add, ord_compare, ord_of_int, ordinal_order,
                       parse_ordinal)
from .jump import (TrueStageTrace, alpha_jump_composite, alpha_jump_stream,
                   alpha_jump_string, alpha_jump_tree,
                   alpha_jump_tree_local, alpha_jump_tree_member,
                   alpha_k_string, in_jump_image, jump_order, jump_stream,
                   jump_string, jump_tree, jump_tree_member, k_string,
                   omega_jump_stream, omega_jump_string, omega_k_string,
                   true_stages)
from .terms import (EpsConst, OmegaPow, PhiApp, PhiConst, Sum, ZERO, Zero,
                    cnf_decomposition, embed_phi, eps_compare, eps_is_normal,
                    eps_normalize, eps_term_order, eps_to_phi, format_term,
                    iexp_op, iso_omega_eps, make_sum, omega_exp_compare,
                    omega_exp_order, omega_exp_to_phi, parse_term,
                    phi_compare, phi_is_normal, phi_normalize,
                    phi_term_order, sum_order, summands)
from .descent import (ExistentialOracle, MonotoneMap, ScanOracle, build_xz,
                      descending_witness, exact_oracle, extract_descending,
                      h_alpha, h_base, h_omega, h_relabel, hirst_stream,
                      identity_map)

__all__ = [name for name in dir() if not name.startswith("_")]
