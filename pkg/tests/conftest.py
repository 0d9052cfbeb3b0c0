import hypothesis

# derandomized so every run (and every worker count) sees the same cases;
# no deadline because Fraction arithmetic on big continuants is spiky
hypothesis.settings.register_profile(
    "clgcd",
    derandomize=True,
    deadline=None,
    max_examples=150,
)
hypothesis.settings.load_profile("clgcd")
