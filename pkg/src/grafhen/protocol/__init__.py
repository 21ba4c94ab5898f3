from .config import MODES, SchemeConfig
from .keys import (SecretKey, draw_generators, find_word_for, format_key, keyspace_bits,
                   load_key, parse_key, save_key)
from .params import (PublicParams, format_ciphers, format_params, load_params,
                     parse_ciphers, parse_params, save_params)
from .scheme import (build_public_params, check_circuit, cipher_of, decrypt, encrypt,
                     eval_circuit, eval_plain, fresh_zero, hom_add, hom_mul, hom_not,
                     keygen, keygen_from_generators, mul_group_ops, parse_circuit,
                     randomized_reduce, self_test)
