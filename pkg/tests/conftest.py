import pytest
from hypothesis import settings

# exact arithmetic makes some examples slow; timing is not what these tests check
settings.register_profile("exact", deadline=None)
settings.load_profile("exact")


@pytest.fixture
def report_line(request):
    """Write one summary line to the terminal, bypassing output capture."""
    reporter = request.config.pluginmanager.getplugin("terminalreporter")

    def write(text: str):
        if reporter is not None:
            reporter.ensure_newline()
            reporter.write_line(text)
        else:
            print(text)
    return write
