"""Exception hierarchy and message formatting."""

from alphahash.errors import (
    AlphaHashError,
    IndexOutOfRange,
    IndexOverflow,
    ModeMismatch,
    NoTermOfSize,
    NotClosed,
    NotLocallyClosed,
    PositionInvalid,
    TermSyntaxError,
    TermTooLarge,
    TrailingInput,
    format_steps,
)


def test_every_domain_error_is_catchable_at_the_root():
    for exc in (
        NotLocallyClosed,
        NotClosed,
        IndexOutOfRange,
        TermTooLarge,
        ModeMismatch,
        NoTermOfSize,
        TermSyntaxError,
        TrailingInput,
        IndexOverflow,
        PositionInvalid,
    ):
        assert issubclass(exc, AlphaHashError)


def test_position_invalid_keeps_the_position():
    err = PositionInvalid(("D", "L"), "no L child here")
    assert err.position == ("D", "L")
    assert "'DL'" in str(err)
    assert "no L child here" in str(err)


def test_position_invalid_renders_root_and_raw_strings():
    assert "'.'" in str(PositionInvalid(()))
    # an unparseable string is shown as given, not reformatted
    assert "'D L'" in str(PositionInvalid("D L", "whitespace"))


def test_syntax_error_fields_and_message():
    err = TermSyntaxError(3, 9, ("a term",), found="]")
    assert (err.line, err.column) == (3, 9)
    assert err.expected == ("a term",)
    assert err.found == "]"
    assert str(err) == "3:9: expected a term, found ']'"
    two = TermSyntaxError(1, 1, ("')'", "a term"))
    assert "')' or a term" in str(two)


def test_format_steps():
    assert format_steps(()) == "."
    assert format_steps(("D", "R", "L")) == "DRL"
