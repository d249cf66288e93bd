"""Workbench configuration: section parsing, unknown-name rejection with the
offending name spelled out, the shared retrieval section, and YAML loading."""

from __future__ import annotations

import pytest

from rcakit.config import (
    ServiceConfig,
    WorkbenchConfig,
    load_config,
    parse_config,
)


def test_missing_path_yields_defaults():
    config = load_config(None)
    assert config.gateway.endpoint == ""
    assert config.gateway.planner_model == "planner"
    assert config.gateway.utility_model == "utility"
    assert config.gateway.api_key_env == "RCAKIT_API_KEY"
    assert config.gateway.context_limit == 8000
    assert config.retrieval.k == 3
    assert config.retrieval.total_budget == 10
    assert config.retrieval.mmr_lambda == 0.7
    assert config.agent.max_iterations == 20
    assert config.agent.approval_required is False
    assert config.service.host == "127.0.0.1"
    assert config.service.port == 8765
    assert config.service.persist_dir == ""


def test_parse_config_accepts_none_and_empty():
    assert parse_config(None) == WorkbenchConfig()
    assert parse_config({}) == WorkbenchConfig()


def test_all_sections_parse():
    config = parse_config(
        {
            "gateway": {"endpoint": "http://gw.local/v1", "timeout_s": 5.0},
            "retrieval": {"k": 5, "total_budget": 12},
            "agent": {"max_iterations": 7, "human_timeout": 2.5},
            "service": {"port": 9000, "approval_required": True},
        }
    )
    assert config.gateway.endpoint == "http://gw.local/v1"
    assert config.gateway.timeout_s == 5.0
    assert config.retrieval.k == 5
    assert config.agent.max_iterations == 7
    assert config.agent.human_timeout == 2.5
    assert config.service.port == 9000
    assert config.service.approval_required is True


def test_agent_retrieval_mirrors_shared_section():
    config = parse_config({"retrieval": {"k": 5, "total_budget": 20}})
    assert config.agent.retrieval is config.retrieval
    assert config.agent.retrieval.k == 5
    assert config.agent.retrieval.total_budget == 20


def test_agent_section_rejects_retrieval_key():
    with pytest.raises(ValueError) as err:
        parse_config({"agent": {"retrieval": {"k": 5}}})
    assert str(err.value) == (
        "unknown key 'retrieval' in section 'agent'; "
        "allowed: approval_required, human_timeout, max_iterations"
    )


def test_unknown_section_is_named():
    with pytest.raises(ValueError) as err:
        parse_config({"chaos": {}})
    assert str(err.value) == (
        "unknown config section 'chaos'; allowed: agent, gateway, retrieval, service"
    )


def test_unknown_key_names_both_key_and_section():
    with pytest.raises(ValueError) as err:
        parse_config({"service": {"prot": 9000}})
    assert str(err.value) == (
        "unknown key 'prot' in section 'service'; "
        "allowed: approval_required, host, human_timeout, persist_dir, port"
    )


def test_root_and_sections_must_be_mappings():
    with pytest.raises(ValueError, match="config root must be a mapping"):
        parse_config(["gateway"])
    with pytest.raises(ValueError, match="config section 'gateway' must be a mapping"):
        parse_config({"gateway": ["endpoint"]})


def test_null_section_uses_defaults():
    config = parse_config({"service": None})
    assert config.service == ServiceConfig()


@pytest.mark.parametrize("port", [0, 65536, -1])
def test_service_port_bounds(port):
    with pytest.raises(ValueError, match=r"port must be in \[1, 65535\]"):
        ServiceConfig(port=port)


def test_service_human_timeout_must_be_nonnegative():
    with pytest.raises(ValueError, match="human_timeout must be >= 0"):
        ServiceConfig(human_timeout=-0.1)
    assert ServiceConfig(human_timeout=0.0).human_timeout == 0.0


def test_load_config_reads_yaml_file(tmp_path):
    path = tmp_path / "workbench.yaml"
    path.write_text(
        "gateway:\n"
        "  endpoint: http://gw.local/v1\n"
        "retrieval:\n"
        "  k: 4\n"
        "service:\n"
        "  persist_dir: /tmp/sessions\n",
        encoding="utf-8",
    )
    config = load_config(path)
    assert config.gateway.endpoint == "http://gw.local/v1"
    assert config.retrieval.k == 4
    assert config.agent.retrieval.k == 4
    assert config.service.persist_dir == "/tmp/sessions"


def test_load_config_names_the_file_on_yaml_errors(tmp_path):
    path = tmp_path / "broken.yaml"
    path.write_text("gateway: [unclosed\n", encoding="utf-8")
    with pytest.raises(ValueError) as err:
        load_config(path)
    assert str(err.value).startswith(f"{path}: invalid YAML:")


def test_load_config_names_the_file_on_bad_keys(tmp_path):
    path = tmp_path / "bad-key.yaml"
    path.write_text("service:\n  prot: 1\n", encoding="utf-8")
    with pytest.raises(ValueError) as err:
        load_config(path)
    assert str(err.value).startswith(f"{path}: unknown key 'prot' in section 'service'")


def test_load_config_missing_file_raises(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_config(tmp_path / "nope.yaml")
