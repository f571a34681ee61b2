"""Prompt rendering: one instance, six prompting strategies.

A strategy controls the scaffolding around the fixed task description,
edge-list encoding, and answer-format line: worked examples (k-shot),
trigger sentences (BaG, 0-CoT), or a pseudo-code listing (Pseudo, in three
styles). Exemplars come from a seed stream disjoint from evaluation graphs,
so few-shot prompts never leak test instances.
"""

from graphbench import (
    PseudocodeStyle,
    SMALL,
    Strategy,
    Task,
    build_instances,
    pseudocode_for,
    render_prompt,
    standard_strategies,
)

RULE = "-" * 72


def main():
    inst = build_instances(Task.CYCLE_CHECK, SMALL, master_seed=0, graph_count=1)[0]
    print(f"instance {inst.id} (gold answer: {inst.gold.value})\n")

    for strategy in standard_strategies():
        bundle = render_prompt(inst, strategy)
        print(RULE)
        print(f"[{strategy.display_name}]")
        print(RULE)
        print(bundle.text)
        print()

    print(RULE)
    print("The Pseudo strategy ships three interchangeable styles per task:")
    print(RULE)
    for style in PseudocodeStyle:
        code = pseudocode_for(Task.CYCLE_CHECK, style)
        first = code.splitlines()[0]
        print(f"  {style.value:<7} ({len(code.splitlines())} lines) starts: {first!r}")


if __name__ == "__main__":
    main()
