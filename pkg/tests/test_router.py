from unittest.mock import Mock

import pytest
from string_toric.config import Settings
from string_toric.exceptions import ValidationError
from string_toric.router import CommandResult, CommandRouter, Option

OPTIONS = {
    "word": Option(("--word",), {"required": True}),
    "text": Option(("--text",), {"action": "store_true"}),
}


def test_command_registration_and_dispatch():
    """Test that a decorated handler receives the parsed arguments."""
    router = CommandRouter(OPTIONS, global_options=("text",))
    handler = Mock(return_value=CommandResult({"ok": True}))
    router.command("paths", description="List paths", usage="--word 1", options=("word",))(handler)

    args = router.build_parser("string-toric").parse_args(["paths", "--word", "1", "--text"])
    settings = Settings()
    result = router.dispatch(args, settings)

    assert result.payload == {"ok": True}
    handler.assert_called_once_with(args, settings)
    assert args.word == "1"
    assert args.text
    assert router.has_command("PATHS")
    assert "paths - List paths" in router.help_text()
    assert set(router.get_commands()) == {"paths"}


def test_unknown_option_is_rejected():
    """Test that commands may only use catalogued options."""
    router = CommandRouter(OPTIONS)
    with pytest.raises(KeyError):
        router.command("paths", options=("lambda",))


def test_bad_usage_raises_validation_error():
    """Test that argparse errors become ValidationError."""
    router = CommandRouter(OPTIONS)
    router.command("paths", options=("word",))(Mock())
    parser = router.build_parser("string-toric")
    with pytest.raises(ValidationError):
        parser.parse_args(["paths"])
    with pytest.raises(ValidationError):
        parser.parse_args(["nope"])


def test_dispatch_unknown_command():
    """Test that dispatching an unregistered command fails."""
    router = CommandRouter(OPTIONS)
    args = Mock(command="missing")
    with pytest.raises(ValidationError, match="unknown command"):
        router.dispatch(args, Settings())
