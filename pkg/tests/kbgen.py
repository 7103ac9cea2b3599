"""Seeded random knowledge-base generator shared across test modules.

Generated KBs are lint-clean by construction (zero error findings):
opposites are symmetric and mutually attacking, every non-default reply
has an endorser that does not also attack it, and the priority list is
complete with the default reply last.
"""

from __future__ import annotations

import itertools
import random

from arguide.kb import Argument, ArgumentKind, KnowledgeBase


def random_kb(
    seed: int,
    max_pairs: int = 6,
    max_replies: int = 3,
    cross_attacks: bool = True,
    paraphrases: bool = True,
) -> KnowledgeBase:
    rng = random.Random(seed)
    n_pairs = rng.randint(1, max_pairs)
    n_replies = rng.randint(2, max_replies)  # the last one is the default

    arguments: dict[str, Argument] = {}
    status_ids: list[str] = []
    for i in range(n_pairs):
        pos, neg = f"d{i}p", f"d{i}n"
        arguments[pos] = Argument(pos, ArgumentKind.STATUS, f"dimension {i} holds", opposite=neg)
        arguments[neg] = Argument(neg, ArgumentKind.STATUS, f"dimension {i} does not hold", opposite=pos)
        status_ids.extend((pos, neg))

    reply_ids = [f"r{j}" for j in range(n_replies - 1)] + ["none"]
    for reply_id in reply_ids:
        arguments[reply_id] = Argument(reply_id, ArgumentKind.REPLY, f"reply {reply_id}")

    attacks = set()
    for i in range(n_pairs):
        attacks.add((f"d{i}p", f"d{i}n"))
        attacks.add((f"d{i}n", f"d{i}p"))

    endorsements = set()
    for reply_id in reply_ids[:-1]:
        endorsers = rng.sample(status_ids, k=rng.randint(1, min(3, len(status_ids))))
        for endorser in endorsers:
            endorsements.add((endorser, reply_id))
        # At most one attacker per pair: if both members of a pair attacked
        # the reply, neutralizing one would require activating the other and
        # the reply could never be consistent.
        non_endorsers = [s for s in status_ids if (s, reply_id) not in endorsements]
        rng.shuffle(non_endorsers)
        wanted = rng.randint(0, 2)
        used_pairs: set[frozenset[str]] = set()
        for attacker in non_endorsers:
            if len(used_pairs) >= wanted:
                break
            pair = frozenset((attacker, arguments[attacker].opposite))
            if pair in used_pairs:
                continue
            used_pairs.add(pair)
            attacks.add((attacker, reply_id))

    if cross_attacks:
        for source, target in itertools.permutations(status_ids, 2):
            same_pair = arguments[source].opposite == target
            if not same_pair and rng.random() < 0.08:
                attacks.add((source, target))

    kb = KnowledgeBase(
        arguments=arguments,
        attacks=frozenset(attacks),
        endorsements=frozenset(endorsements),
        reply_priority=tuple(reply_ids),
    )
    if paraphrases:
        kb = KnowledgeBase(
            arguments=arguments,
            attacks=kb.attacks,
            endorsements=kb.endorsements,
            reply_priority=kb.reply_priority,
            paraphrases={s: (f"i am {s}",) for s in status_ids},
        )
    return kb


def all_activation_states(kb: KnowledgeBase):
    """Every reachable activation set: each dimension unset, primary
    active, or opposite active."""
    per_dimension = []
    for dim in kb.dimensions:
        options = [(), (dim[0],)]
        if len(dim) == 2:
            options.append((dim[1],))
        per_dimension.append(options)
    for combo in itertools.product(*per_dimension):
        yield frozenset(member for chosen in combo for member in chosen)
