use super::Branch;
use crate::formulas::ObjVar;

/// Generated from `y`, directly or through a chain of generated variables.
pub(crate) fn descends_from_y(b: &Branch, v: &ObjVar) -> bool {
    let y = ObjVar::y();
    let mut cur = v;
    while let Some(g) = b.genealogy.get(cur) {
        match &g.parent {
            Some(p) if *p == y => return true,
            Some(p) => cur = p,
            None => return false,
        }
    }
    false
}

/// `x`, then the variables that do not descend from `y` in introduction
/// order, then `y`, then the descendants of `y` in introduction order.
pub fn var_order(b: &Branch) -> Vec<ObjVar> {
    let (x, y) = (ObjVar::x(), ObjVar::y());
    let generated = b.vars.iter().filter(|v| **v != x && **v != y);
    let (below, above): (Vec<&ObjVar>, Vec<&ObjVar>) = generated.partition(|v| !descends_from_y(b, v));
    let mut order = Vec::with_capacity(b.vars.len());
    order.push(x);
    order.extend(below.into_iter().cloned());
    order.push(y);
    order.extend(above.into_iter().cloned());
    order
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{Genealogy, RuleTag};
    use crate::formulas::parse_formula;

    fn generate(b: &mut Branch, name: &str, generator: &str, rule: RuleTag) {
        let generator = parse_formula(generator).unwrap();
        let v = ObjVar::new(name);
        b.vars.insert(v.clone());
        let parent = (rule != RuleTag::NotCompB).then(|| generator.left.clone());
        b.genealogy.insert(v, Genealogy { generator, parent, rule });
    }

    fn names(order: Vec<ObjVar>) -> Vec<String> {
        order.into_iter().map(|v| v.to_string()).collect()
    }

    #[test]
    fn endpoints_only() {
        let b = Branch::new(parse_formula("x r y").unwrap());
        assert_eq!(names(var_order(&b)), ["x", "y"]);
    }

    #[test]
    fn descendants_of_y_come_after_it() {
        let mut b = Branch::new(parse_formula("x r y").unwrap());
        generate(&mut b, "z1", "x -(r ; (s ; 1)) y", RuleTag::NotComp);
        generate(&mut b, "z2", "y -(p ; (q ; 1)) y", RuleTag::NotComp);
        generate(&mut b, "z3", "z2 -(q ; 1) y", RuleTag::NotCompA);
        generate(&mut b, "z4", "z1 -(s ; 1) y", RuleTag::NotCompA);
        assert_eq!(names(var_order(&b)), ["x", "z1", "z4", "y", "z2", "z3"]);
    }

    #[test]
    fn one_left_variable_follows_x() {
        let mut b = Branch::new(parse_formula("x r y").unwrap());
        generate(&mut b, "z1", "x -(1 ; (s ; 1)) y", RuleTag::NotCompB);
        assert_eq!(names(var_order(&b)), ["x", "z1", "y"]);
        assert!(!descends_from_y(&b, &ObjVar::new("z1")));
    }
}
