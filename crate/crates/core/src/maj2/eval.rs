use super::{Maj2Error, Maj2Formula as M, Var};

/// Positions (1-based) for x and y.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Assignment {
    pub x: Option<usize>,
    pub y: Option<usize>,
}

impl Assignment {
    pub fn x(i: usize) -> Self {
        Assignment { x: Some(i), y: None }
    }
    fn get(&self, v: Var) -> Option<usize> {
        match v {
            Var::X => self.x,
            Var::Y => self.y,
        }
    }
}

/// `t[x-1][y-1]`: truth with x and y at those positions. Entries do not
/// depend on a variable that is not free.
pub fn eval_table(f: &M, w: &[char]) -> Result<Vec<Vec<bool>>, Maj2Error> {
    if w.is_empty() {
        return Err(Maj2Error::EmptyWord);
    }
    Ok(table(f, w))
}

fn at(v: Var, x: usize, y: usize) -> usize {
    match v {
        Var::X => x,
        Var::Y => y,
    }
}

fn table(f: &M, w: &[char]) -> Vec<Vec<bool>> {
    let n = w.len();
    let build = |g: &dyn Fn(usize, usize) -> bool| -> Vec<Vec<bool>> {
        (0..n).map(|x| (0..n).map(|y| g(x, y)).collect()).collect()
    };
    match f {
        M::Sym(c, v) => build(&|x, y| w[at(*v, x, y)] == *c),
        M::Less(a, b) => build(&|x, y| at(*a, x, y) < at(*b, x, y)),
        M::Bool(b) => vec![vec![*b; n]; n],
        M::Not(a) => {
            let t = table(a, w);
            build(&|x, y| !t[x][y])
        }
        M::And(a, b) => {
            let (ta, tb) = (table(a, w), table(b, w));
            build(&|x, y| ta[x][y] && tb[x][y])
        }
        M::Or(a, b) => {
            let (ta, tb) = (table(a, w), table(b, w));
            build(&|x, y| ta[x][y] || tb[x][y])
        }
        M::Maj(v, items) => {
            let ts: Vec<_> = items.iter().map(|g| table(g, w)).collect();
            let m = items.len();
            // value for each position of the other variable
            let per: Vec<bool> = (0..n)
                .map(|o| {
                    let mut count = 0usize;
                    for t in &ts {
                        for i in 0..n {
                            let (x, y) = if *v == Var::X { (i, o) } else { (o, i) };
                            count += t[x][y] as usize;
                        }
                    }
                    2 * count > n * m
                })
                .collect();
            build(&|x, y| per[at(v.other(), x, y)])
        }
        M::Exists(v, a) | M::Forall(v, a) => {
            let t = table(a, w);
            let all = matches!(f, M::Forall(..));
            let per: Vec<bool> = (0..n)
                .map(|o| {
                    let mut it = (0..n).map(|i| if *v == Var::X { t[i][o] } else { t[o][i] });
                    if all {
                        it.all(|b| b)
                    } else {
                        it.any(|b| b)
                    }
                })
                .collect();
            build(&|x, y| per[at(v.other(), x, y)])
        }
    }
}

pub fn eval_maj2(f: &M, w: &[char], xi: Assignment) -> Result<bool, Maj2Error> {
    if w.is_empty() {
        return Err(Maj2Error::EmptyWord);
    }
    let n = w.len();
    let free = f.free();
    let mut pos = [0usize; 2];
    for v in [Var::X, Var::Y] {
        match xi.get(v) {
            Some(i) if i == 0 || i > n => return Err(Maj2Error::PositionOutOfRange { i, n }),
            Some(i) => pos[v as usize] = i - 1,
            None if free[v as usize] => return Err(Maj2Error::Unbound(v)),
            None => {}
        }
    }
    Ok(table(f, w)[pos[0]][pos[1]])
}

/// Acceptance with x at the last position. Closed formulas ignore x.
pub fn accepts_end(f: &M, w: &[char]) -> Result<bool, Maj2Error> {
    if f.free()[1] {
        return Err(Maj2Error::Unbound(Var::Y));
    }
    if w.is_empty() {
        return Err(Maj2Error::EmptyWord);
    }
    eval_maj2(f, w, Assignment::x(w.len()))
}
