import pytest

from config import SimulationConfig

XLSX_MIMETYPE = 'application/vnd.openxmlformats-officedocument.spreadsheetml.sheet'


def post(client, path, **payload):
    return client.post(f'/api{path}', json=payload)


def test_list_kernels(client):
    response = client.get('/api/kernels')
    assert response.status_code == 200
    kernels = {kernel['name']: kernel for kernel in response.get_json()['kernels']}
    assert len(kernels) == 3
    assert kernels['cnot']['matrix'] == [[1, 0], [1, 1]]
    assert kernels['cnot']['polarizing'] is True


def test_complexity_of_cp22(client):
    response = post(client, '/complexity', kernel='cnot', depth=2, steps=4)
    data = response.get_json()
    assert response.status_code == 200
    assert data['success'] is True
    assert data['gate_counts'] == [15, 14, 12, 8]
    assert data['w_star'] == 3
    assert data['m_gates'] == 5


@pytest.mark.parametrize('payload, message', [
    ({'kernel': 'cnot', 'steps': 4}, 'Depth is required'),
    ({}, 'No data provided'),
    ({'kernel': 'file:/etc/kernel.json', 'depth': 1, 'steps': 2}, 'Kernel files'),
])
def test_complexity_validation(client, payload, message):
    response = client.post('/api/complexity', json=payload)
    assert response.status_code == 400
    assert message in response.get_json()['error']


@pytest.mark.parametrize('field, value', [('kernel', 'hadamard'), ('p', 0.8), ('rate', '5/4'), ('depth', 'two')])
def test_bad_parameters_are_rejected(client, field, value):
    payload = {'kernel': 'cnot', 'depth': 1, 'steps': 2, field: value}
    response = client.post('/api/profile', json=payload)
    assert response.status_code == 400
    assert response.get_json()['success'] is False


@pytest.mark.parametrize('path', ['/complexity', '/profile', '/decode', '/simulations'])
def test_long_codes_are_refused(client, path):
    response = post(client, path, kernel='cnot', depth=1, steps=25, y='0')
    assert response.status_code == 400
    assert 'Block length is limited to' in response.get_json()['error']


def test_length_limit_follows_config(client, monkeypatch):
    monkeypatch.setattr(SimulationConfig, 'MAX_API_LENGTH', 8)
    assert post(client, '/complexity', kernel='cnot', depth=1, steps=3).status_code == 200
    assert post(client, '/complexity', kernel='g3', depth=1, steps=2).status_code == 400


def test_library_errors_become_bad_requests(client):
    response = post(client, '/complexity', kernel='cnot', depth=0, steps=2)
    assert response.status_code == 400
    assert 'Depth' in response.get_json()['error']


def test_profile_of_pair(client):
    response = post(client, '/profile', kernel='cnot', depth=1, steps=1, p=0.25, rate='1/2')
    data = response.get_json()
    assert response.status_code == 200
    assert data['profile'] == pytest.approx([0.375, 0.0625])
    assert data['code']['frozen'] == [0]
    assert data['p_undetected'] == pytest.approx(0.0625)
    assert data['run']['kind'] == 'detect'


def test_decode_zero_word(client):
    response = post(client, '/decode', kernel='cnot', depth=2, steps=4, p=0.1, rate='1/2', y='0' * 16)
    data = response.get_json()
    assert response.status_code == 200
    assert data['u_hat'] == [0] * 16
    assert len(data['message']) == 8
    assert data['windows'][0] == [0, 3]
    assert len(data['confidence']) == len(data['windows'])
    assert all(0.0 <= value <= 1.0 for value in data['confidence'])


@pytest.mark.parametrize('extra', [{'y': '0' * 15}, {'y': [0] * 15 + [2]}, {}, {'y': '0' * 16, 'width': 0},
                                   {'y': '0' * 16, 'width': 'abc'}])
def test_decode_validation(client, extra):
    response = post(client, '/decode', kernel='cnot', depth=2, steps=4, **extra)
    assert response.status_code == 400
    assert response.get_json()['success'] is False


def test_simulation_lifecycle(client):
    assert client.get('/api/simulations/export').status_code == 404

    response = post(client, '/simulations', kernel='cnot', depth=2, steps=3, p=0.0, rate='1/2', trials=20, seed=3)
    data = response.get_json()
    assert response.status_code == 200
    assert data['data']['ber'] == 0.0
    assert data['data']['trials'] == 20
    run_id = data['result_id']

    listing = client.get('/api/simulations').get_json()
    assert listing['pagination']['total'] == 1
    assert listing['data'][0]['id'] == run_id
    assert listing['data'][0]['seed'] == 3
    assert client.get('/api/simulations?kind=detect').get_json()['pagination']['total'] == 0

    export = client.get('/api/simulations/export')
    assert export.status_code == 200
    assert export.mimetype == XLSX_MIMETYPE

    assert client.delete(f'/api/simulations/{run_id}').status_code == 200
    assert client.delete(f'/api/simulations/{run_id}').status_code == 404


@pytest.mark.parametrize('extra', [
    {'trials': SimulationConfig.MAX_API_TRIALS + 1},
    {'trials': 0},
    {'trials': 'many'},
    {'trials': 5, 'seed': -1},
    {'trials': 5, 'seed': 'abc'},
])
def test_simulation_validation(client, extra):
    response = post(client, '/simulations', kernel='cnot', depth=1, steps=2, **extra)
    assert response.status_code == 400
